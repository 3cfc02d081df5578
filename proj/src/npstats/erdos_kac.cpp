#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npf/npstats.hpp"
#include "npf/primes.hpp"

namespace npf::npstats {

double ks_distance_to_normal(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("KS distance of an empty sample");
    std::ranges::sort(sample);
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
        d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    return d;
}

ErdosKacReport erdos_kac_sample(const qexp::FormHandle& form, std::uint64_t X, std::uint32_t y, Parallelism par) {
    if (X < 100) throw std::invalid_argument("erdos_kac_sample: X must be at least 100");
    if (y < 100) throw std::invalid_argument("erdos_kac_sample: y must be at least 100");
    if (X > form.table_bound())
        throw std::out_of_range("X=" + std::to_string(X) + " exceeds the coefficient table bound " +
                                std::to_string(form.table_bound()));

    // log log p ≤ 1 for p ≤ 15, so the sample starts at 17
    std::vector<std::uint64_t> primes;
    for (std::uint32_t p : cached_primes(static_cast<std::uint32_t>(X)))
        if (p >= 17 && form.is_good_prime(p)) primes.push_back(p);

    std::vector<double> z(primes.size());
    parallel_for(primes.size(), par, [&](std::size_t i) {
        const double ll = std::log(std::log(static_cast<double>(primes[i])));
        const unsigned w = truncated_omega(np_value(form, primes[i]), y);
        z[i] = (w - ll) / std::sqrt(ll);
    });

    ErdosKacReport r;
    r.X = X;
    r.y = y;
    r.sample_size = z.size();
    if (z.empty()) return r;
    double sum = 0;
    for (double v : z) sum += v;
    r.mean = sum / z.size();
    double ss = 0;
    for (double v : z) ss += (v - r.mean) * (v - r.mean);
    r.variance = z.size() > 1 ? ss / (z.size() - 1) : 0.0;
    r.ks_distance = ks_distance_to_normal(z);
    return r;
}

}  // namespace npf::npstats
