// Copyright 2026 The clockqubo Authors
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

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clockqubo {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// One entry per binary variable, 0 or 1.
using Bits = std::vector<std::uint8_t>;

// Error hierarchy. Every failure the library reports derives from Error so
// callers can catch the whole family in one place.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
  public:
    using Error::Error;
};

class ShapeError : public Error {
  public:
    using Error::Error;
};

class InvalidGenerator : public Error {
  public:
    using Error::Error;
};

class SingularSystem : public Error {
  public:
    using Error::Error;
};

class NumericalInconsistency : public Error {
  public:
    using Error::Error;
};

class SizeLimit : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

namespace detail {

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const auto v = m(i, j);
            if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            } else {
                if (!std::isfinite(v)) return false;
            }
        }
    return true;
}

inline std::string shape_str(Eigen::Index r, Eigen::Index c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

} // namespace detail

} // namespace clockqubo
