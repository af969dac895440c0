// Copyright 2026 The profq Authors.
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

#pragma once

#include "profq/checksum.hpp"
#include "profq/corpus.hpp"
#include "profq/csv.hpp"
#include "profq/error.hpp"
#include "profq/features.hpp"
#include "profq/learn/forest.hpp"
#include "profq/learn/metrics.hpp"
#include "profq/learn/model_io.hpp"
#include "profq/learn/svm.hpp"
#include "profq/learn/tfidf.hpp"
#include "profq/pipeline.hpp"
#include "profq/pragmatic.hpp"
#include "profq/rng.hpp"
#include "profq/rules.hpp"
#include "profq/stats.hpp"
#include "profq/surface.hpp"
#include "profq/textcore.hpp"
