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

#pragma once

// Convenience header pulling in the whole library.

#include "optbench/core/delegate.hpp"
#include "optbench/core/domain.hpp"
#include "optbench/core/errors.hpp"
#include "optbench/core/optimizer.hpp"
#include "optbench/core/run_loop.hpp"
#include "optbench/core/seed.hpp"
#include "optbench/solvers/cma.hpp"
#include "optbench/solvers/continuous.hpp"
#include "optbench/solvers/de.hpp"
#include "optbench/solvers/discrete.hpp"
#include "optbench/solvers/es.hpp"
#include "optbench/solvers/local_search.hpp"
#include "optbench/solvers/metamodel.hpp"
#include "optbench/solvers/probe_task.hpp"
#include "optbench/solvers/quadratic_model.hpp"
#include "optbench/solvers/recentering.hpp"
#include "optbench/solvers/softmax.hpp"
#include "optbench/solvers/tbpsa.hpp"
#include "optbench/combinators/bet_and_run.hpp"
#include "optbench/combinators/chain.hpp"
#include "optbench/combinators/progressive.hpp"
#include "optbench/combinators/spec.hpp"
#include "optbench/wizard/registry.hpp"
#include "optbench/wizard/selection.hpp"
#include "optbench/bench/functions.hpp"
#include "optbench/bench/problem.hpp"
#include "optbench/bench/suites.hpp"
#include "optbench/harness/experiment.hpp"
#include "optbench/harness/external.hpp"
#include "optbench/harness/records.hpp"
#include "optbench/harness/report.hpp"
