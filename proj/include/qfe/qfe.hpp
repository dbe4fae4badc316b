// Copyright 2026 The QFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFE_QFE_HPP
#define QFE_QFE_HPP

#include "qfe/benchmark.hpp"
#include "qfe/classifier.hpp"
#include "qfe/config.hpp"
#include "qfe/core.hpp"
#include "qfe/corpus_io.hpp"
#include "qfe/fairness.hpp"
#include "qfe/kde.hpp"
#include "qfe/matrix.hpp"
#include "qfe/pmc.hpp"
#include "qfe/protocol.hpp"
#include "qfe/quantifiers.hpp"
#include "qfe/report.hpp"
#include "qfe/random.hpp"
#include "qfe/retrieval.hpp"
#include "qfe/simplex_solver.hpp"
#include "qfe/synthetic.hpp"
#include "qfe/text.hpp"

#endif  // QFE_QFE_HPP
