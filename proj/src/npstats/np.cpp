#include <stdexcept>
#include <string>

#include "npf/error.hpp"
#include "npf/npstats.hpp"
#include "npf/primes.hpp"

namespace npf::npstats {

BigInt np_value(const qexp::FormHandle& form, std::uint64_t p) {
    if (!form.is_good_prime(p)) throw ExcludedPrime(p, form.level());
    const BigInt& ap = form.ap(p);
    return pow_ui(p, form.weight() - 1) + 1 - ap;
}

namespace {

NpRecord make_record(std::uint64_t p, BigInt np, FactoredInteger f) {
    NpRecord r;
    r.p = p;
    r.np = std::move(np);
    r.factorization = std::move(f);
    r.omega = r.factorization.omega();
    r.big_omega = r.factorization.big_omega();
    r.complete = r.factorization.complete();
    return r;
}

}  // namespace

NpRecord np_record(const qexp::FormHandle& form, std::uint64_t p, const FactorBudget& budget) {
    BigInt np = np_value(form, p);
    FactoredInteger f = factorize(np, budget);
    return make_record(p, std::move(np), std::move(f));
}

FilterOutcome evaluate_filter(const ScanFilter& filter, const NpRecord& record) {
    const unsigned value = filter.kind == CountKind::omega ? record.omega : record.big_omega;
    if (record.complete) {
        const bool hit = filter.relation == Relation::equal ? value == filter.target : value <= filter.target;
        return hit ? FilterOutcome::match : FilterOutcome::no_match;
    }
    // value is only a lower bound here
    return value > filter.target ? FilterOutcome::no_match : FilterOutcome::undecided;
}

ScanResult scan(const qexp::FormHandle& form, std::uint64_t X, const std::optional<ScanFilter>& filter,
                const FactorBudget& budget, Parallelism par) {
    if (X > form.table_bound())
        throw std::out_of_range("scan bound X=" + std::to_string(X) + " exceeds the coefficient table bound " +
                                std::to_string(form.table_bound()) + " of " + form.label());
    std::vector<std::uint64_t> primes;
    for (std::uint32_t p : cached_primes(static_cast<std::uint32_t>(X)))
        if (form.is_good_prime(p)) primes.push_back(p);

    enum class Slot { keep, drop, undecided };
    std::vector<NpRecord> records(primes.size());
    std::vector<Slot> slots(primes.size(), Slot::keep);

    parallel_for(primes.size(), par, [&](std::size_t i) {
        const std::uint64_t p = primes[i];
        if (!filter) {
            records[i] = np_record(form, p, budget);
            return;
        }
        BigInt np = np_value(form, p);
        NpRecord r = make_record(p, np, factorize(np, FactorBudget::no_rho(budget.trial_bound)));
        FilterOutcome outcome = evaluate_filter(*filter, r);
        if (outcome == FilterOutcome::undecided && budget.rho_rounds > 0) {
            r = make_record(p, np, factorize(np, budget));
            outcome = evaluate_filter(*filter, r);
        }
        slots[i] = outcome == FilterOutcome::match ? Slot::keep
                   : outcome == FilterOutcome::no_match ? Slot::drop
                                                        : Slot::undecided;
        records[i] = std::move(r);
    });

    ScanResult result;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (slots[i] == Slot::keep)
            result.records.push_back(std::move(records[i]));
        else if (slots[i] == Slot::undecided)
            result.undecided.push_back(std::move(records[i]));
    }
    return result;
}

std::vector<std::uint64_t> congruence_scan(const qexp::FormHandle& form, const BigInt& modulus, std::uint64_t X,
                                           std::uint64_t start) {
    if (modulus < 1) throw std::invalid_argument("congruence_scan: modulus must be positive");
    if (X > form.table_bound())
        throw std::out_of_range("X=" + std::to_string(X) + " exceeds the coefficient table bound " +
                                std::to_string(form.table_bound()));
    std::vector<std::uint64_t> violations;
    for (std::uint32_t p : cached_primes(static_cast<std::uint32_t>(X))) {
        if (p < start || !form.is_good_prime(p)) continue;
        const BigInt np = np_value(form, p);
        if (!mpz_divisible_p(np.get_mpz_t(), modulus.get_mpz_t())) violations.push_back(p);
    }
    return violations;
}

unsigned truncated_omega(const BigInt& n, std::uint32_t y) {
    if (n < 1) throw std::invalid_argument("truncated_omega: n must be >= 1");
    unsigned count = 0;
    for (std::uint32_t ell : cached_primes(y))
        if (mpz_divisible_ui_p(n.get_mpz_t(), ell)) ++count;
    return count;
}

}  // namespace npf::npstats
