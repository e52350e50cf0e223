#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nrr {

using cplx = std::complex<double>;

// Single magnitude definition used everywhere (|z| = sqrt(re^2 + im^2)).
// std::abs(cplx) is avoided: its overflow-safe scaling is slower and this
// project never sees values anywhere near the overflow range.
inline double magnitude(cplx z) { return std::sqrt(std::norm(z)); }

// Bad input data: malformed files, shape mismatches, out-of-field targets.
// The CLI maps this to exit code 3 (std::invalid_argument maps to 2).
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nrr
