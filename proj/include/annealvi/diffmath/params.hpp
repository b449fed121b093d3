// Copyright 2026 The annealvi Authors
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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "annealvi/diffmath/tape.hpp"

namespace annealvi {

struct ParameterBlock {
  std::string name;
  std::vector<double> values;
  bool trainable = true;
};

// Ordered collection of uniquely named parameter blocks.
class ParamSet {
 public:
  ParameterBlock& add(std::string name, std::vector<double> values,
                      bool trainable = true) {
    if (contains(name)) {
      throw std::invalid_argument("ParamSet: duplicate block '" + name + "'");
    }
    blocks_.push_back({std::move(name), std::move(values), trainable});
    return blocks_.back();
  }

  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const ParameterBlock* find(std::string_view name) const {
    for (const auto& b : blocks_)
      if (b.name == name) return &b;
    return nullptr;
  }
  ParameterBlock* find(std::string_view name) {
    for (auto& b : blocks_)
      if (b.name == name) return &b;
    return nullptr;
  }

  const ParameterBlock& at(std::string_view name) const {
    const auto* b = find(name);
    if (!b) throw std::out_of_range("ParamSet: no block '" + std::string(name) + "'");
    return *b;
  }
  ParameterBlock& at(std::string_view name) {
    auto* b = find(name);
    if (!b) throw std::out_of_range("ParamSet: no block '" + std::string(name) + "'");
    return *b;
  }

  void set_trainable(std::string_view name, bool trainable) {
    at(name).trainable = trainable;
  }

  std::vector<ParameterBlock>& blocks() { return blocks_; }
  const std::vector<ParameterBlock>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

 private:
  std::vector<ParameterBlock> blocks_;
};

// Per-block values of scalar type T, aligned with a ParamSet.
template <class T>
class BlockValues {
 public:
  void add(std::string name, std::vector<T> values) {
    names_.push_back(std::move(name));
    values_.push_back(std::move(values));
  }
  const std::vector<T>* find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return &values_[i];
    return nullptr;
  }
  const std::vector<T>& operator[](std::string_view name) const {
    const auto* v = find(name);
    if (!v) throw std::out_of_range("BlockValues: no block '" + std::string(name) + "'");
    return *v;
  }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<T>>& values() const { return values_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<T>> values_;
};

inline BlockValues<double> values_of(const ParamSet& params) {
  BlockValues<double> out;
  for (const auto& b : params.blocks()) out.add(b.name, b.values);
  return out;
}

// Trainable blocks become tape leaves; frozen blocks enter as constants.
inline BlockValues<Var> record_leaves(const ParamSet& params, Tape& tape) {
  BlockValues<Var> out;
  for (const auto& b : params.blocks()) {
    std::vector<Var> v;
    v.reserve(b.values.size());
    for (double x : b.values) v.push_back(b.trainable ? tape.variable(x) : Var(x));
    out.add(b.name, std::move(v));
  }
  return out;
}

// Per-block partial derivatives, in ParamSet order.
class GradReport {
 public:
  struct Entry {
    std::string name;
    std::vector<double> values;
  };

  static GradReport zeros_like(const ParamSet& params) {
    GradReport g;
    for (const auto& b : params.blocks())
      if (b.trainable) g.entries_.push_back({b.name, std::vector<double>(b.values.size(), 0.0)});
    return g;
  }

  void add_block(std::string name, std::vector<double> values) {
    entries_.push_back({std::move(name), std::move(values)});
  }

  bool contains(std::string_view name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.name == name; });
  }
  const std::vector<double>& at(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e.values;
    throw std::out_of_range("GradReport: no block '" + std::string(name) + "'");
  }
  std::vector<double>& at(std::string_view name) {
    for (auto& e : entries_)
      if (e.name == name) return e.values;
    throw std::out_of_range("GradReport: no block '" + std::string(name) + "'");
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }

  std::vector<double> flatten() const {
    std::vector<double> out;
    for (const auto& e : entries_) out.insert(out.end(), e.values.begin(), e.values.end());
    return out;
  }
  std::vector<std::string> coordinate_names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      for (std::size_t i = 0; i < e.values.size(); ++i)
        out.push_back(e.name + "[" + std::to_string(i) + "]");
    return out;
  }

  // this += scale * other, block-aligned by name.
  void accumulate(const GradReport& other, double scale = 1.0) {
    if (entries_.empty()) {
      for (const auto& e : other.entries_) entries_.push_back({e.name, std::vector<double>(e.values.size(), 0.0)});
    }
    for (const auto& e : other.entries_) {
      auto& dst = at(e.name);
      if (dst.size() != e.values.size()) {
        throw std::invalid_argument("GradReport: block size mismatch for '" + e.name + "'");
      }
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * e.values[i];
    }
  }

  void scale_by(double s) {
    for (auto& e : entries_)
      for (double& v : e.values) v *= s;
  }

 private:
  std::vector<Entry> entries_;
};

struct Differentiated {
  double value = 0.0;
  GradReport grads;
};

namespace detail {
inline GradReport extract(const ParamSet& params, const BlockValues<Var>& leaves,
                          const std::vector<double>& adj) {
  GradReport g;
  for (std::size_t bi = 0; bi < params.blocks().size(); ++bi) {
    const auto& b = params.blocks()[bi];
    if (!b.trainable) continue;
    const auto& vars = leaves.values()[bi];
    std::vector<double> grad(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) grad[i] = adj[vars[i].index()];
    g.add_block(b.name, std::move(grad));
  }
  return g;
}
}  // namespace detail

// Records `f` once on a fresh tape and returns the value together with exact
// reverse-mode partials for every trainable block. `f` receives a
// BlockValues<Var> and must return a Var.
template <class F>
Differentiated differentiate(F&& f, const ParamSet& params) {
  Tape tape;
  const BlockValues<Var> leaves = record_leaves(params, tape);
  const Var out = f(leaves);
  return {out.value(), detail::extract(params, leaves, tape.adjoints(out))};
}

// Same as differentiate for a computation with several scalar outputs; one
// reverse sweep per output over a shared recording.
template <class F>
std::vector<Differentiated> differentiate_many(F&& f, const ParamSet& params) {
  Tape tape;
  const BlockValues<Var> leaves = record_leaves(params, tape);
  const std::vector<Var> outs = f(leaves);
  std::vector<Differentiated> result;
  result.reserve(outs.size());
  for (const Var& out : outs) {
    result.push_back({out.value(), detail::extract(params, leaves, tape.adjoints(out))});
  }
  return result;
}

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h over every trainable
// coordinate. `f` receives a BlockValues<double>.
template <class F>
GradReport finite_diff_grad(F&& f, const ParamSet& params, double h = 1e-5) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
  ParamSet work = params;
  GradReport g;
  for (std::size_t bi = 0; bi < work.blocks().size(); ++bi) {
    auto& block = work.blocks()[bi];
    if (!block.trainable) continue;
    std::vector<double> grad(block.values.size());
    for (std::size_t i = 0; i < block.values.size(); ++i) {
      const double x0 = block.values[i];
      block.values[i] = x0 + h;
      const double fp = static_cast<double>(f(values_of(work)));
      block.values[i] = x0 - h;
      const double fm = static_cast<double>(f(values_of(work)));
      block.values[i] = x0;
      grad[i] = (fp - fm) / (2.0 * h);
    }
    g.add_block(block.name, std::move(grad));
  }
  return g;
}

// max_i |a_i - b_i| / max(1, max_i |b_i|) over the flattened reports.
inline double relative_error(const GradReport& a, const GradReport& b) {
  const auto x = a.flatten();
  const auto y = b.flatten();
  if (x.size() != y.size()) throw std::invalid_argument("relative_error: size mismatch");
  double num = 0.0, den = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num = std::max(num, std::abs(x[i] - y[i]));
    den = std::max(den, std::abs(y[i]));
  }
  return num / den;
}

}  // namespace annealvi
