#include <cmath>

#include "fskjcr/error.hpp"
#include "fskjcr/kernels.hpp"

namespace fskjcr::kernels {

void AfRowTerms::clear()
{
    coef_re.clear();
    coef_im.clear();
    lo.clear();
    hi.clear();
    g_start.clear();
}

void AfRowTerms::push(std::complex<double> coef, std::int64_t g, double lower, double upper)
{
    coef_re.push_back(coef.real());
    coef_im.push_back(coef.imag());
    lo.push_back(lower);
    hi.push_back(upper);
    g_start.push_back(g);
}

void af_row_scalar(const AfRowTerms& terms, double unit, std::span<double> out)
{
    const std::size_t cols = out.size();
    std::vector<double> acc_re(cols, 0.0), acc_im(cols, 0.0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const double cr = terms.coef_re[t], ci = terms.coef_im[t];
        const double a = terms.lo[t], b = terms.hi[t];
        for (std::size_t j = 0; j < cols; ++j) {
            const std::int64_t g = terms.g_start[t] + static_cast<std::int64_t>(j);
            double vr, vi;
            if (g == 0) {
                vr = b - a;
                vi = 0.0;
            } else {
                const double gamma = unit * static_cast<double>(g);
                // (e^{i gamma b} - e^{i gamma a}) / (i gamma)
                const double nr = std::cos(gamma * b) - std::cos(gamma * a);
                const double ni = std::sin(gamma * b) - std::sin(gamma * a);
                vr = ni / gamma;
                vi = -nr / gamma;
            }
            acc_re[j] += cr * vr - ci * vi;
            acc_im[j] += cr * vi + ci * vr;
        }
    }
    for (std::size_t j = 0; j < cols; ++j) out[j] = std::hypot(acc_re[j], acc_im[j]);
}

void lag_products_scalar(std::span<const std::complex<double>> phasors, std::size_t lag,
                         std::span<std::complex<double>> out)
{
    const std::size_t n = phasors.size();
    if (lag > n || out.size() < n - lag) throw DomainError("lag_products: output too small");
    for (std::size_t l = lag; l < n; ++l) {
        const double ar = phasors[l].real(), ai = phasors[l].imag();
        const double br = phasors[l - lag].real(), bi = phasors[l - lag].imag();
        out[l - lag] = {ar * br + ai * bi, ai * br - ar * bi};
    }
}

}  // namespace fskjcr::kernels
