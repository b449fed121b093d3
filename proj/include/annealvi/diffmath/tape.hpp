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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace annealvi {

class Tape;

// A scalar taking part in a recorded computation. A Var without a tape is a
// constant; arithmetic between constants never touches a tape.
class Var {
 public:
  Var() = default;
  Var(double constant) : value_(constant) {}  // NOLINT(google-explicit-constructor)

  double value() const { return value_; }
  Tape* tape() const { return tape_; }
  std::int32_t index() const { return index_; }
  bool is_constant() const { return tape_ == nullptr; }

 private:
  friend class Tape;
  Var(double value, Tape* tape, std::int32_t index)
      : value_(value), tape_(tape), index_(index) {}

  double value_ = 0.0;
  Tape* tape_ = nullptr;
  std::int32_t index_ = -1;
};

// Linear reverse-mode tape. Each node stores at most two parents together
// with the local partial derivatives, so a reverse sweep is one pass.
class Tape {
 public:
  Tape() { nodes_.reserve(1 << 12); }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value) {
    nodes_.push_back({-1, -1, 0.0, 0.0});
    return Var(value, this, static_cast<std::int32_t>(nodes_.size() - 1));
  }

  std::size_t size() const { return nodes_.size(); }

  // Adjoints of every recorded node with respect to `output`.
  std::vector<double> adjoints(const Var& output) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (output.is_constant()) return adj;
    if (output.tape() != this) {
      throw std::invalid_argument("adjoints: output recorded on another tape");
    }
    adj[output.index()] = 1.0;
    for (std::int32_t i = output.index(); i >= 0; --i) {
      const double g = adj[i];
      if (g == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.a >= 0) adj[n.a] += g * n.da;
      if (n.b >= 0) adj[n.b] += g * n.db;
    }
    return adj;
  }

  // Records a unary result. Constant inputs produce constant outputs.
  static Var unary(double value, const Var& a, double da) {
    if (a.is_constant()) return Var(value);
    Tape* t = a.tape();
    t->nodes_.push_back({a.index(), -1, da, 0.0});
    return Var(value, t, static_cast<std::int32_t>(t->nodes_.size() - 1));
  }

  static Var binary(double value, const Var& a, double da, const Var& b,
                    double db) {
    if (a.is_constant()) return unary(value, b, db);
    if (b.is_constant()) return unary(value, a, da);
    if (a.tape() != b.tape()) {
      throw std::invalid_argument("Var operands recorded on different tapes");
    }
    Tape* t = a.tape();
    t->nodes_.push_back({a.index(), b.index(), da, db});
    return Var(value, t, static_cast<std::int32_t>(t->nodes_.size() - 1));
  }

 private:
  struct Node {
    std::int32_t a;
    std::int32_t b;
    double da;
    double db;
  };
  std::vector<Node> nodes_;
};

inline Var operator+(const Var& a, const Var& b) {
  return Tape::binary(a.value() + b.value(), a, 1.0, b, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
  return Tape::binary(a.value() - b.value(), a, 1.0, b, -1.0);
}
inline Var operator*(const Var& a, const Var& b) {
  return Tape::binary(a.value() * b.value(), a, b.value(), b, a.value());
}
inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.value();
  const double q = a.value() * inv;
  return Tape::binary(q, a, inv, b, -q * inv);
}
inline Var operator-(const Var& a) { return Tape::unary(-a.value(), a, -1.0); }

inline Var operator+(const Var& a, double b) { return Tape::unary(a.value() + b, a, 1.0); }
inline Var operator+(double a, const Var& b) { return Tape::unary(a + b.value(), b, 1.0); }
inline Var operator-(const Var& a, double b) { return Tape::unary(a.value() - b, a, 1.0); }
inline Var operator-(double a, const Var& b) { return Tape::unary(a - b.value(), b, -1.0); }
inline Var operator*(const Var& a, double b) { return Tape::unary(a.value() * b, a, b); }
inline Var operator*(double a, const Var& b) { return Tape::unary(a * b.value(), b, a); }
inline Var operator/(const Var& a, double b) { return Tape::unary(a.value() / b, a, 1.0 / b); }
inline Var operator/(double a, const Var& b) {
  const double q = a / b.value();
  return Tape::unary(q, b, -q / b.value());
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return Tape::unary(e, a, e);
}
inline Var log(const Var& a) {
  return Tape::unary(std::log(a.value()), a, 1.0 / a.value());
}
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.value());
  return Tape::unary(s, a, 0.5 / s);
}
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.value());
  return Tape::unary(t, a, 1.0 - t * t);
}

// Elementwise helpers shared by double and Var code paths.
inline double square(double a) { return a * a; }
inline Var square(const Var& a) {
  return Tape::unary(a.value() * a.value(), a, 2.0 * a.value());
}

inline double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}
inline Var sigmoid(const Var& a) {
  const double s = sigmoid(a.value());
  return Tape::unary(s, a, s * (1.0 - s));
}

inline double softplus(double a) {
  return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}
inline Var softplus(const Var& a) {
  return Tape::unary(softplus(a.value()), a, sigmoid(a.value()));
}

// log(1 - exp(a)) for a < 0.
inline double log1m_exp(double a) {
  if (a >= 0.0) return -std::numeric_limits<double>::infinity();
  return a > -0.6931471805599453 ? std::log(-std::expm1(a))
                                  : std::log1p(-std::exp(a));
}
inline Var log1m_exp(const Var& a) {
  const double v = log1m_exp(a.value());
  // d/da log(1 - e^a) = -e^a / (1 - e^a) = -1 / expm1(-a)
  return Tape::unary(v, a, -1.0 / std::expm1(-a.value()));
}

// min(a, 0); the derivative is taken as 0 on the flat branch.
inline double min_zero(double a) { return a < 0.0 ? a : 0.0; }
inline Var min_zero(const Var& a) { return a.value() < 0.0 ? a : Var(0.0); }

inline double value_of(double a) { return a; }
inline double value_of(const Var& a) { return a.value(); }

using std::exp;
using std::log;
using std::sqrt;
using std::tanh;

template <class T>
std::vector<double> values_of(const std::vector<T>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = value_of(v[i]);
  return out;
}

}  // namespace annealvi
