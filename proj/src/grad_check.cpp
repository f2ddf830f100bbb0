#include "hanet/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "hanet/errors.hpp"

namespace hanet {

double grad_check(const std::function<double(const Tensor&)>& f, const Tensor& x,
                  const Tensor& analytic, double eps) {
    if (!x.same_shape(analytic)) {
        throw DimensionError("grad_check: input " + x.shape_str() + " vs analytic " +
                             analytic.shape_str());
    }
    Tensor probe = x;
    double worst = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + eps;
        const double fp = f(probe);
        probe[i] = orig - eps;
        const double fm = f(probe);
        probe[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("grad_check: non-finite value at coordinate " +
                               std::to_string(i));
        }
        const double numeric = (fp - fm) / (2.0 * eps);
        const double err = std::abs(analytic[i] - numeric) /
                           std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace hanet
