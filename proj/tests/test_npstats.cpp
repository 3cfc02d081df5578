#include <doctest.h>

#include <cmath>
#include <random>

#include "npf/error.hpp"
#include "npf/npstats.hpp"
#include "oracles.hpp"

using namespace npf;
using namespace npf::npstats;

namespace {

const qexp::FormHandle& delta(std::size_t N = 16001) {
    static const auto form = qexp::eigenform_expansion(12, 16001);
    REQUIRE(N <= 16001);
    return form;
}

}  // namespace

TEST_CASE("factorize small examples") {
    auto f = factorize(BigInt(2073));
    CHECK(f.render() == "3*691");
    CHECK(f.omega() == 2);
    CHECK(f.big_omega() == 2);
    f = factorize(BigInt(48823296));
    CHECK(f.render() == "2^10*3*23*691");
    CHECK(f.big_omega() == 13);
    f = factorize(BigInt(1));
    CHECK(f.factors.empty());
    CHECK(!f.cofactor);
    CHECK(f.render() == "1");
    CHECK(f.complete());
    CHECK(factorize(BigInt(176896)).render() == "2^8*691");
}

TEST_CASE("factorize reassembles and agrees with trial-division omega") {
    std::mt19937_64 rng(7);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(99);
    for (int i = 0; i < 300; ++i) {
        BigInt n = gr.get_z_bits(1 + rng() % 40) + 1;
        const auto f = factorize(n, FactorBudget::no_rho(1000));
        REQUIRE(f.product() == n);
        for (std::size_t j = 1; j < f.factors.size(); ++j) CHECK(f.factors[j - 1].prime < f.factors[j].prime);
        if (f.complete()) {
            CHECK(f.omega() == oracle::omega_trial(n));
        }
    }
}

TEST_CASE("factorize splits products of two large primes with rho") {
    BigInt p, q;
    mpz_nextprime(p.get_mpz_t(), BigInt("1000000007").get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), BigInt("77777777777777").get_mpz_t());
    const BigInt n = p * q * 12;
    const auto f = factorize(n);
    CHECK(f.complete());
    CHECK(f.cofactor_status == CofactorStatus::none);
    CHECK(f.render() == "2^2*3*" + p.get_str() + "*" + q.get_str());
}

TEST_CASE("budget exhaustion leaves a composite cofactor, never throws") {
    BigInt p, q;
    mpz_nextprime(p.get_mpz_t(), BigInt("100000000000000000000000000000").get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), BigInt("300000000000000000000000000000").get_mpz_t());
    const BigInt n = p * q * 8;
    const auto f = factorize(n, FactorBudget::no_rho(1000));
    CHECK(!f.complete());
    CHECK(f.cofactor_status == CofactorStatus::composite_unfactored);
    CHECK(f.product() == n);
    CHECK(f.omega() == 3);      // 2 plus at least two hidden
    CHECK(f.big_omega() == 5);  // 2^3 plus at least two hidden
    CHECK(f.render() == "2^3*[" + BigInt(p * q).get_str() + "]");
}

TEST_CASE("perfect powers of large primes") {
    BigInt p;
    mpz_nextprime(p.get_mpz_t(), BigInt("10000000000000000000000000007").get_mpz_t());
    BigInt n = p * p * p;
    const auto f = factorize(n, FactorBudget::no_rho(100));
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].prime == p);
    CHECK(f.factors[0].exponent == 3);
    CHECK(f.complete());
}

TEST_CASE("primality battery agrees with GMP") {
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(2024);
    for (int i = 0; i < 3000; ++i) {
        BigInt n = gr.get_z_bits(2 + i % 120);
        if (n < 2) continue;
        const bool gmp = mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
        const auto ours = primality(n);
        CAPTURE(n.get_str());
        CHECK((ours != Primality::composite) == gmp);
    }
    // strong pseudoprimes to base 2 and the Arnault number fooling many bases
    CHECK(primality(BigInt(2047)) == Primality::composite);
    CHECK(primality(BigInt(3215031751)) == Primality::composite);
    CHECK(primality(BigInt("3317044064679887385961981")) == Primality::composite);
    CHECK(primality(BigInt(1000003)) == Primality::prime);
    BigInt big;
    mpz_nextprime(big.get_mpz_t(), BigInt("10000000000000000000000000000").get_mpz_t());
    CHECK(primality(big) == Primality::probable_prime);
    CHECK(strong_lucas_probable_prime(big));
    // 5459 = 53·103 and 5777 = 53·109 are the two smallest strong Lucas pseudoprimes
    CHECK(strong_lucas_probable_prime(BigInt(5459)));
    CHECK(strong_lucas_probable_prime(BigInt(5777)));
    CHECK(!strong_lucas_probable_prime(BigInt(5461)));
}

TEST_CASE("rho seeds depend only on the input") {
    CHECK(rho_seed(BigInt(12345), 0) == rho_seed(BigInt(12345), 0));
    CHECK(rho_seed(BigInt(12345), 0) != rho_seed(BigInt(12345), 1));
    CHECK(rho_seed(BigInt(12345), 0) != rho_seed(BigInt(12346), 0));
}

TEST_CASE("np_value and np_record") {
    const auto& d = delta();
    CHECK(np_value(d, 2) == 2073);
    CHECK(np_value(d, 5) == 48823296);
    CHECK(np_value(d, 3) == 176896);
    const auto d16 = qexp::eigenform_expansion(16, 10);
    CHECK(np_value(d16, 2) == 32553);

    auto r = np_record(d, 5);
    CHECK(r.omega == 4);
    CHECK(r.big_omega == 13);
    CHECK(r.complete);
    r = np_record(d, 2);
    CHECK(r.omega == 2);
    CHECK(r.big_omega == 2);
    r = np_record(d, 3);
    CHECK(r.omega == 2);
    CHECK(r.big_omega == 9);

    qexp::FormHandle::Spec s;
    s.weight = 4;
    s.level = 11;
    s.label = "t";
    s.ap_table = {{2, BigInt(1)}, {11, BigInt(11)}};
    const qexp::FormHandle f(s);
    CHECK_THROWS_AS(np_value(f, 11), ExcludedPrime);
    CHECK_THROWS_AS(np_value(f, 3), CoefficientUnavailable);
    CHECK(np_value(f, 2) == 8);
}

TEST_CASE("scan with omega filter") {
    const auto& d = delta();
    const ScanFilter w4{CountKind::omega, Relation::equal, 4};
    const auto r = scan(d, 2000, w4);
    std::vector<std::uint64_t> ps;
    for (const auto& rec : r.records) ps.push_back(rec.p);
    CHECK(ps == std::vector<std::uint64_t>{5, 7, 577, 1153, 1297});
    CHECK(r.undecided.empty());

    const auto r2 = scan(d, 100, ScanFilter{CountKind::omega, Relation::equal, 2});
    REQUIRE(r2.records.size() >= 2);
    CHECK(r2.records[0].p == 2);
    CHECK(r2.records[1].p == 3);
    CHECK(scan(d, 4, ScanFilter{CountKind::omega, Relation::equal, 1}).records.empty());
    CHECK_THROWS_AS(scan(d, 16001, std::nullopt), std::out_of_range);
}

TEST_CASE("scan is independent of the worker count") {
    const auto& d = delta();
    FactorBudget b;
    b.rho_rounds = 2;
    b.rho_iterations = 1u << 12;
    const auto serial = scan(d, 1500, std::nullopt, b, Parallelism{1});
    const auto parallel = scan(d, 1500, std::nullopt, b, Parallelism{4});
    CHECK(serial.records == parallel.records);
    for (const auto& rec : serial.records) {
        REQUIRE(rec.factorization.product() == rec.np);
        if (rec.complete) CHECK(rec.omega <= rec.big_omega);
    }
    const ScanFilter f{CountKind::big_omega, Relation::at_most, 9};
    CHECK(scan(d, 3000, f, b, Parallelism{1}).records == scan(d, 3000, f, b, Parallelism{3}).records);
}

TEST_CASE("evaluate_filter on incomplete records") {
    NpRecord r;
    r.complete = false;
    r.omega = 3;
    r.big_omega = 10;
    CHECK(evaluate_filter({CountKind::omega, Relation::equal, 2}, r) == FilterOutcome::no_match);
    CHECK(evaluate_filter({CountKind::omega, Relation::equal, 3}, r) == FilterOutcome::undecided);
    CHECK(evaluate_filter({CountKind::omega, Relation::at_most, 5}, r) == FilterOutcome::undecided);
    CHECK(evaluate_filter({CountKind::big_omega, Relation::at_most, 9}, r) == FilterOutcome::no_match);
    r.complete = true;
    CHECK(evaluate_filter({CountKind::omega, Relation::equal, 3}, r) == FilterOutcome::match);
}

TEST_CASE("congruence_scan") {
    const auto& d = delta();
    CHECK(congruence_scan(d, BigInt(66336), 10000, 5).empty());
    CHECK(congruence_scan(d, BigInt(66336), 4, 2) == std::vector<std::uint64_t>{2, 3});
    CHECK(congruence_scan(d, BigInt(1), 1000, 2).empty());
}

TEST_CASE("truncated_omega") {
    CHECK(truncated_omega(BigInt(48823296), 100) == 3);
    CHECK(truncated_omega(BigInt(12), 10) == 2);
    CHECK(truncated_omega(BigInt(1), 1000) == 0);
    const auto& d = delta();
    for (const auto& rec : scan(d, 2000, std::nullopt, FactorBudget::no_rho(1000)).records) {
        if (!rec.complete) continue;
        bool all_small = true;
        for (const auto& f : rec.factorization.factors) all_small = all_small && f.prime <= 1000;
        if (rec.factorization.cofactor) all_small = false;
        if (all_small) CHECK(truncated_omega(rec.np, 1000) == rec.omega);
    }
}

TEST_CASE("Erdos-Kac sample") {
    const auto& d = delta();
    const auto r = erdos_kac_sample(d, 1000, 1000);
    CHECK(r.sample_size == 162);
    CHECK(r.ks_distance >= 0);
    CHECK(r.ks_distance <= 1);
    CHECK_THROWS(erdos_kac_sample(d, 99, 1000));
    CHECK_THROWS(erdos_kac_sample(d, 1000, 50));
    CHECK(erdos_kac_sample(d, 1000, 1000, Parallelism{3}).ks_distance == r.ks_distance);
}

TEST_CASE("KS distance against hand values") {
    CHECK(ks_distance_to_normal({0.0}) == doctest::Approx(0.5));
    // one point far right: CDF jumps from 0 to 1 where Φ ≈ 1
    CHECK(ks_distance_to_normal({40.0}) == doctest::Approx(1.0));
}
