#pragma once

#include <functional>
#include <span>

#include "ariel/matrix.hpp"

namespace ariel {

/// ⟨u,v⟩ / (‖u‖‖v‖). Throws DomainError naming the zero-norm argument.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

using ScalarFunction = std::function<double(const Matrix&)>;

/// Central-difference gradient of f at x: (f(x+h·e) − f(x−h·e)) / 2h per
/// entry. Throws NumericError if f is non-finite at any probe point.
Matrix finite_diff_gradient(const ScalarFunction& f, const Matrix& x, double h = 1e-5);

}  // namespace ariel
