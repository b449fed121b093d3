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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "annealvi/diffmath/tape.hpp"

namespace annealvi {

template <class T>
using Vec = std::vector<T>;

template <class A, class B>
using Promote = std::common_type_t<A, B>;

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                ")");
  }
}

template <class T, class U>
Promote<T, U> dot(const Vec<T>& a, const Vec<U>& b) {
  require_same_size(a.size(), b.size(), "dot");
  Promote<T, U> acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// y = M v for a row-major rows x cols matrix stored flat.
template <class T, class U>
Vec<Promote<T, U>> matvec(const Vec<T>& m, std::size_t rows, std::size_t cols,
                          const Vec<U>& v) {
  require_same_size(m.size(), rows * cols, "matvec matrix");
  require_same_size(v.size(), cols, "matvec vector");
  Vec<Promote<T, U>> out(rows, Promote<T, U>(0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    Promote<T, U> acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += m[r * cols + c] * v[c];
    out[r] = acc;
  }
  return out;
}

// y = M^T v for a row-major rows x cols matrix stored flat.
template <class T, class U>
Vec<Promote<T, U>> matvec_transposed(const Vec<T>& m, std::size_t rows,
                                     std::size_t cols, const Vec<U>& v) {
  require_same_size(m.size(), rows * cols, "matvec_transposed matrix");
  require_same_size(v.size(), rows, "matvec_transposed vector");
  Vec<Promote<T, U>> out(cols, Promote<T, U>(0.0));
  for (std::size_t c = 0; c < cols; ++c) {
    Promote<T, U> acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += m[r * cols + c] * v[r];
    out[c] = acc;
  }
  return out;
}

template <class T, class U>
Vec<Promote<T, U>> add(const Vec<T>& a, const Vec<U>& b) {
  require_same_size(a.size(), b.size(), "add");
  Vec<Promote<T, U>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <class T, class U>
Vec<Promote<T, U>> sub(const Vec<T>& a, const Vec<U>& b) {
  require_same_size(a.size(), b.size(), "sub");
  Vec<Promote<T, U>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <class T, class U>
Vec<Promote<T, U>> hadamard(const Vec<T>& a, const Vec<U>& b) {
  require_same_size(a.size(), b.size(), "hadamard");
  Vec<Promote<T, U>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

template <class T, class U>
Vec<Promote<T, U>> scale(const U& s, const Vec<T>& a) {
  Vec<Promote<T, U>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

template <class T>
Vec<T> cumulative_sum(const Vec<T>& a) {
  Vec<T> out(a.size());
  T acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i];
    out[i] = acc;
  }
  return out;
}

template <class T>
Vec<T> lift(const Vec<double>& a) {
  return Vec<T>(a.begin(), a.end());
}

}  // namespace annealvi
