#pragma once

#include <span>

namespace arks {

/// Least-squares slope of ln(values) against ln(times). Both spans must have
/// equal length >= 2 and strictly positive entries; no validation here.
double log_log_slope(std::span<const double> times, std::span<const double> values);

}  // namespace arks
