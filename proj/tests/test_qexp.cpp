#include <doctest.h>

#include <random>
#include <sstream>

#include "npf/error.hpp"
#include "npf/qexp.hpp"
#include "oracles.hpp"

using namespace npf;
using namespace npf::qexp;

namespace {

IntSeries random_series(std::mt19937_64& rng, std::size_t n, unsigned bits) {
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    std::vector<BigInt> c(n);
    for (auto& x : c) {
        x = gr.get_z_bits(1 + rng() % bits);
        if (rng() & 1) x = -x;
        if (rng() % 7 == 0) x = 0;
    }
    return IntSeries(std::move(c));
}

IntSeries from(std::initializer_list<long> xs) {
    std::vector<BigInt> c;
    for (long x : xs) c.emplace_back(x);
    return IntSeries(std::move(c));
}

}  // namespace

TEST_CASE("series_mul small identities") {
    auto p = series_mul(from({1, 1, 0}), from({1, -1, 0}));
    CHECK(p == from({1, 0, -1}));
    CHECK(series_mul(from({3, 4, 5}), IntSeries(3)) == IntSeries(3));
    CHECK(series_mul(from({7}), from({6})) == from({42}));
    auto sq = series_mul(eta_product(10), eta_product(10));
    CHECK(sq[2] == -1);
}

TEST_CASE("series_mul truncates to the shorter operand") {
    auto p = series_mul(from({1, 2, 3, 4, 5}), from({1, 1}));
    REQUIRE(p.precision() == 2);
    CHECK(p == from({1, 3}));
}

TEST_CASE("Kronecker product agrees with schoolbook") {
    std::mt19937_64 rng(12345);
    for (std::size_t n : {1u, 2u, 17u, 31u, 32u, 33u, 64u, 257u, 600u}) {
        for (unsigned bits : {1u, 40u, 300u}) {
            auto a = random_series(rng, n, bits);
            auto b = random_series(rng, n + rng() % 5, bits / 2 + 1);
            CAPTURE(n);
            CAPTURE(bits);
            CHECK(series_mul(a, b) == series_mul_schoolbook(a, b));
        }
    }
    // all-negative and sparse edge cases
    std::vector<BigInt> neg(100, BigInt(-1)), sparse(100, BigInt(0));
    sparse[99] = BigInt("-123456789012345678901234567890");
    sparse[0] = 1;
    CHECK(series_mul(IntSeries(neg), IntSeries(sparse)) == series_mul_schoolbook(IntSeries(neg), IntSeries(sparse)));
}

TEST_CASE("series_pow") {
    auto a = from({1, 1, 0, 0});
    CHECK(series_pow(a, 0) == IntSeries::one(4));
    CHECK(series_pow(a, 1) == a);
    CHECK(series_pow(a, 3)[2] == 3);
    CHECK(series_pow(a, 3) == from({1, 3, 3, 1}));
}

TEST_CASE("eta_product matches direct multiplication") {
    CHECK(eta_product(8) == from({1, -1, -1, 0, 0, 1, 0, 1}));
    const auto naive = oracle::eta_power(300, 1);
    const auto fast = eta_product(300);
    for (std::size_t i = 0; i < 300; ++i) CHECK(fast[i] == naive[i]);
}

TEST_CASE("Eisenstein constants and expansions") {
    CHECK(eisenstein_constant(4) == 240);
    CHECK(eisenstein_constant(6) == -504);
    CHECK(eisenstein_constant(8) == 480);
    CHECK(eisenstein_constant(10) == -264);
    CHECK(eisenstein_constant(14) == -24);
    CHECK_THROWS(eisenstein_constant(12));
    auto e4 = eisenstein_expansion(4, 4);
    CHECK(e4 == from({1, 240, 2160, 6720}));
    for (int k : {4, 6, 8, 10, 14}) {
        auto e = eisenstein_expansion(k, 40);
        CHECK(e[0] == 1);
        for (std::uint64_t n = 1; n < 40; ++n) CHECK(e[n] == eisenstein_constant(k) * oracle::sigma(n, k - 1));
    }
}

TEST_CASE("Delta agrees with the eta product") {
    const std::size_t N = 600;
    const auto want = oracle::delta_by_eta(N);
    const auto form = eigenform_expansion(12, N);
    REQUIRE(form.series() != nullptr);
    for (std::size_t i = 0; i < N; ++i) REQUIRE((*form.series())[i] == want[i]);
    CHECK(form.ap(2) == -24);
    CHECK(form.ap(3) == 252);
    CHECK(form.ap(5) == 4830);
    CHECK(form.label() == "delta12");
    CHECK(form.source() == FormSource::computed_level_one);
}

TEST_CASE("higher-weight eigenforms equal Delta times Eisenstein series") {
    const std::size_t N = 120;
    const auto delta = oracle::delta_by_eta(N);
    auto as_vec = [](const IntSeries& s) { return std::vector<BigInt>(s.coeffs().begin(), s.coeffs().end()); };
    const auto e4 = as_vec(eisenstein_expansion(4, N)), e6 = as_vec(eisenstein_expansion(6, N));
    const std::vector<std::pair<int, std::vector<BigInt>>> cases = {
        {16, oracle::mul(delta, e4, N)},
        {18, oracle::mul(delta, e6, N)},
        {20, oracle::mul(oracle::mul(delta, e4, N), e4, N)},
        {22, oracle::mul(oracle::mul(delta, e4, N), e6, N)},
        {26, oracle::mul(oracle::mul(oracle::mul(delta, e4, N), e4, N), e6, N)},
    };
    for (const auto& [k, want] : cases) {
        CAPTURE(k);
        const auto form = eigenform_expansion(k, N);
        for (std::size_t i = 0; i < N; ++i) CHECK((*form.series())[i] == want[i]);
    }
    CHECK(eigenform_expansion(16, 10).ap(2) == 216);
}

TEST_CASE("Hecke relations hold on computed coefficients") {
    // m, n ≤ 300 coprime needs coefficients to 90000
    const std::size_t N = 90001;
    const auto form = eigenform_expansion(12, N);
    const auto& a = *form.series();
    for (std::uint64_t m = 1; m <= 300; ++m)
        for (std::uint64_t n = m; n <= 300; ++n)
            if (std::gcd(m, n) == 1) REQUIRE(a[m * n] == a[m] * a[n]);
    const BigInt p11_2 = 2048;
    CHECK(a[4] == a[2] * a[2] - p11_2);
    for (std::uint64_t p : oracle::primes_below(101)) {
        const BigInt pk = pow_ui(p, 11);
        std::uint64_t prev = 1, cur = p;
        for (unsigned r = 1; r <= 3 && cur * p < N; ++r) {
            REQUIRE(a[cur * p] == a[p] * a[cur] - pk * a[prev]);
            prev = cur;
            cur *= p;
        }
    }
}

TEST_CASE("Hecke relations for every level-one eigenform") {
    for (int k : kEigenformWeights) {
        CAPTURE(k);
        const std::size_t N = 3001;
        const auto form = eigenform_expansion(k, N);
        const auto& a = *form.series();
        for (std::uint64_t m = 1; m <= 54; ++m)
            for (std::uint64_t n = m; n <= 54; ++n)
                if (std::gcd(m, n) == 1) REQUIRE(a[m * n] == a[m] * a[n]);
        for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
            const BigInt pk = pow_ui(p, k - 1);
            std::uint64_t prev = 1, cur = p;
            for (unsigned r = 1; r <= 3; ++r) {
                REQUIRE(a[cur * p] == a[p] * a[cur] - pk * a[prev]);
                prev = cur;
                cur *= p;
            }
        }
        const auto table = hecke_table(form, N - 1);
        for (std::size_t n = 0; n < N; ++n) REQUIRE(table[n] == a[n]);
    }
}

TEST_CASE("hecke_coefficient") {
    const auto form = eigenform_expansion(12, 50);
    CHECK(hecke_coefficient(form, 1) == 1);
    CHECK(hecke_coefficient(form, 4) == -1472);
    CHECK(hecke_coefficient(form, 6) == -6048);
    CHECK(hecke_coefficient(form, 49 * 47) == hecke_coefficient(form, 49) * hecke_coefficient(form, 47));
    try {
        hecke_coefficient(form, 53);
        FAIL("expected CoefficientUnavailable");
    } catch (const CoefficientUnavailable& e) {
        CHECK(e.prime() == 53);
    }
}

TEST_CASE("precision ceiling") {
    CHECK_THROWS_AS(eigenform_expansion(12, 101, 100), std::length_error);
    CHECK_THROWS_AS(eigenform_expansion(14, 10), std::invalid_argument);
}

TEST_CASE("FormHandle validation") {
    FormHandle::Spec s;
    s.weight = 4;
    s.level = 11;
    s.label = "t";
    s.ap_table = {{2, BigInt(5)}};
    CHECK_NOTHROW(FormHandle{s});
    s.ap_table = {{2, BigInt(6)}};  // 36 > 4·8
    CHECK_THROWS(FormHandle{s});
    s.ap_table = {{11, BigInt(1000)}};  // ramified: no bound
    CHECK_NOTHROW(FormHandle{s});
    s.ap_table = {{4, BigInt(1)}};
    CHECK_THROWS(FormHandle{s});
    s.ap_table = {};
    s.weight = 5;
    CHECK_THROWS(FormHandle{s});
}

TEST_CASE("coefficient file parsing") {
    const std::string good =
        "# npf-coeffs v1\n"
        "# level=11 weight=4 label=11.4.a.a\n"
        "2 1\n3 -4\n5 2\n7 -4\n11 11\n";
    std::istringstream in(good);
    const auto form = ingest_form(in);
    CHECK(form.source() == FormSource::ingested);
    CHECK(form.level() == 11);
    CHECK(form.weight() == 4);
    CHECK(form.label() == "11.4.a.a");
    CHECK(form.table_bound() == 11);
    CHECK(form.ap(3) == -4);
    CHECK(hecke_coefficient(form, 121) == 121);  // ramified: a_{p^2} = a_p^2

    std::ostringstream out;
    write_coefficient_file(out, form);
    CHECK(out.str() == good);

    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream s(text);
        try {
            ingest_form(s);
        } catch (const FormatError& e) {
            return e.line();
        }
        return 0;
    };
    const std::string head = "# npf-coeffs v1\n# level=11 weight=4 label=x\n";
    CHECK(line_of("# npf-coeffs v2\n# level=1 weight=12 label=x\n") == 1);
    CHECK(line_of("# npf-coeffs v1\n# level=1 weight=12\n") == 2);
    CHECK(line_of(head + "2 1\n4 10\n") == 4);
    CHECK(line_of(head + "2 12\n") == 3);
    CHECK(line_of(head + "2 1\n3 1\n3 1\n") == 5);
    CHECK(line_of(head + "3 1\n2 1\n") == 4);
    CHECK(line_of(head + "2  1\n") == 3);
    CHECK(line_of(head + "2 1\n\n3 1\n") == 4);
    CHECK(line_of(head + "2 1\r\n3 1\n\n") == 0);  // CR stripped, trailing blank allowed
}

TEST_CASE("cached eigenform round trip") {
    oracle::TempDir dir("qexp");
    const auto cold = cached_eigenform(12, 500, dir.path);
    CHECK(cold.series() != nullptr);
    CHECK(std::filesystem::exists(dir.path / "delta12-N500.coeffs"));
    const auto warm = cached_eigenform(12, 500, dir.path);
    CHECK(warm.series() == nullptr);
    CHECK(warm.ap_table() == cold.ap_table());
    CHECK(warm.table_bound() == 499);
    CHECK(warm.source() == FormSource::computed_level_one);
}
