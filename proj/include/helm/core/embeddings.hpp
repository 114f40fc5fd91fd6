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

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace helm {

// Externally computed vectors keyed by reference string. All vectors share one
// dimensionality and none has zero norm.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Throws std::invalid_argument on dimensionality mismatch, zero norm,
  // non-finite components, or a duplicate key.
  void insert(std::string key, std::vector<double> vector);

  bool contains(const std::string& key) const {
    return vectors_.contains(key);
  }
  // Throws std::out_of_range naming the key.
  std::span<const double> at(const std::string& key) const;

  std::size_t dimensionality() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }

  const std::map<std::string, std::vector<double>>& entries() const noexcept {
    return vectors_;
  }

  friend bool operator==(const EmbeddingTable&,
                         const EmbeddingTable&) = default;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// Cosine similarity. Throws std::invalid_argument on size mismatch or a
// zero-norm operand.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace helm
