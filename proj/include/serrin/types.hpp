#pragma once

#include <complex>

namespace serrin {
using Complex = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
} // namespace serrin
