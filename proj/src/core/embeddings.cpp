// Copyright 2026 The HELM Eval Authors.
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

#include "helm/core/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helm {

void EmbeddingTable::insert(std::string key, std::vector<double> vector) {
  if (vector.empty()) {
    throw std::invalid_argument("embedding '" + key + "' is empty");
  }
  if (dim_ != 0 && vector.size() != dim_) {
    throw std::invalid_argument(
        "embedding '" + key + "' has dimensionality " +
        std::to_string(vector.size()) + ", table has " + std::to_string(dim_));
  }
  double norm2 = 0.0;
  for (double x : vector) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("embedding '" + key +
                                  "' has a non-finite component");
    }
    norm2 += x * x;
  }
  if (norm2 == 0.0) {
    throw std::invalid_argument("embedding '" + key + "' has zero norm");
  }
  if (vectors_.contains(key)) {
    throw std::invalid_argument("duplicate embedding key '" + key + "'");
  }
  dim_ = vector.size();
  vectors_.emplace(std::move(key), std::move(vector));
}

std::span<const double> EmbeddingTable::at(const std::string& key) const {
  auto it = vectors_.find(key);
  if (it == vectors_.end()) {
    throw std::out_of_range("unknown embedding key '" + key + "'");
  }
  return it->second;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine: dimensionality mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine: zero-norm vector");
  }
  // sqrt(na * nb) keeps cos(a, a) exactly 1.
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace helm
