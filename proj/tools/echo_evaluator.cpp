// Copyright 2026 The optbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal external evaluator speaking the optbench line protocol: the loss
// is the squared norm of the point. Used by the tests and as a template for
// wrapping real simulators.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

int main(int argc, char** argv) {
  CLI::App app{"squared-norm evaluator for the optbench protocol"};
  int dim = 3;
  bool bad_id = false;
  int die_after = -1;
  app.add_option("--dim", dim, "number of continuous variables")->check(CLI::PositiveNumber);
  app.add_flag("--bad-id", bad_id, "answer with a wrong request id");
  app.add_option("--die-after", die_after, "exit without answering after this many evaluations");
  CLI11_PARSE(app, argc, argv);

  std::cout << nlohmann::json{{"type", "hello"}, {"dimension", dim}, {"minimum", 0.0}}.dump() << std::endl;
  std::string line;
  int served = 0;
  while (std::getline(std::cin, line)) {
    const auto msg = nlohmann::json::parse(line);
    const auto type = msg.at("type").get<std::string>();
    if (type == "quit") break;
    if (type != "eval") continue;
    if (die_after >= 0 && served >= die_after) std::_Exit(3);
    double loss = 0.0;
    for (const auto& v : msg.at("point")) loss += v.get<double>() * v.get<double>();
    auto id = msg.at("id").get<std::uint64_t>();
    if (bad_id) id += 1000;
    std::cout << nlohmann::json{{"type", "loss"}, {"id", id}, {"value", loss}}.dump() << std::endl;
    ++served;
  }
  return 0;
}
