#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "npf/cli.hpp"
#include "oracles.hpp"

using namespace npf;
using namespace npf::cli;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

EnvLookup env_of(std::map<std::string, std::string> vars) {
    return [vars = std::move(vars)](const std::string& k) -> std::optional<std::string> {
        auto it = vars.find(k);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    };
}

Run run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
    args.insert(args.begin(), "npf");
    std::ostringstream out, err;
    Run r;
    r.status = dispatch(args, out, err, env_of(std::move(env)));
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace

TEST_CASE("config text parsing") {
    std::istringstream in("# comment\n\ncache_dir = /tmp/x\ntrial_bound=5000\nthreads=auto\noutput_format=json\n");
    const auto layer = parse_config_text(in);
    CHECK(layer.cache_dir == std::filesystem::path("/tmp/x"));
    CHECK(layer.trial_bound == 5000u);
    CHECK(layer.threads == 0u);
    CHECK(layer.output_format == OutputFormat::json);
    CHECK(!layer.precision_ceiling);

    std::istringstream bad_key("colour=blue\n");
    CHECK_THROWS_AS(parse_config_text(bad_key), ConfigError);
    std::istringstream bad_val("trial_bound=-3\n");
    CHECK_THROWS_AS(parse_config_text(bad_val), ConfigError);
    std::istringstream zero("factor_budget_seconds=0\n");
    CHECK_THROWS_AS(parse_config_text(zero), ConfigError);
    std::istringstream no_eq("threads\n");
    CHECK_THROWS_AS(parse_config_text(no_eq), ConfigError);
}

TEST_CASE("config precedence is flag > env > file > default") {
    ConfigLayer flag, env, file;
    file.trial_bound = 10;
    file.threads = 3;
    file.precision_ceiling = 500;
    env.trial_bound = 20;
    env.threads = 4;
    flag.trial_bound = 30;
    const auto cfg = resolve_config(flag, env, file);
    CHECK(cfg.trial_bound == 30);
    CHECK(cfg.threads == 4);
    CHECK(cfg.precision_ceiling == 500);
    CHECK(cfg.factor_budget_seconds == 10.0);
    CHECK(!cfg.output_format);

    const auto from_env = environment_layer(env_of({{"NPF_TRIAL_BOUND", "77"}, {"NPF_OUTPUT_FORMAT", "csv"}}));
    CHECK(from_env.trial_bound == 77u);
    CHECK(from_env.output_format == OutputFormat::csv);
    CHECK_THROWS_AS(environment_layer(env_of({{"NPF_THREADS", "many"}})), ConfigError);
}

TEST_CASE("bounds output is exact") {
    const auto r = run({"bounds", "--k", "12"});
    CHECK(r.status == 0);
    CHECK(r.out == "{\"k\":12,\"omega_bound\":62,\"big_omega_bound\":98,\"grh_omega_bound\":98,\"selberg_exponent\":100}\n");
    CHECK(r.err.empty());
    const auto csv = run({"bounds", "--k", "12", "--format", "csv"});
    CHECK(csv.out == "k,omega_bound,big_omega_bound,grh_omega_bound,selberg_exponent\n12,62,98,98,100\n");
    const auto env_fmt = run({"bounds", "--k", "12"}, {{"NPF_OUTPUT_FORMAT", "csv"}});
    CHECK(env_fmt.out == csv.out);
}

TEST_CASE("exit codes") {
    CHECK(run({}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({"bounds"}).status == 2);
    CHECK(run({"bounds", "--k", "3"}).status == 2);
    CHECK(run({"bounds", "--k", "12", "--format", "yaml"}).status == 2);
    CHECK(run({"bounds", "--k", "12"}, {{"NPF_TRIAL_BOUND", "0"}}).status == 2);
    CHECK(run({"--help"}).status == 0);
    CHECK(run({"chowla", "--p", "5", "--n", "4", "--i-max", "0"}).status == 1);
    CHECK(run({"chowla", "--p", "103", "--n", "24", "--i-max", "2"}).status == 0);
    CHECK(run({"bernoulli", "--k", "402"}).status == 2);
    CHECK(run({"sieve", "--threshold", "g2", "--lo", "3", "--hi", "4"}).status == 2);
}

TEST_CASE("threshold and sieve outputs") {
    const auto r = run({"sieve", "--threshold", "g1", "--lo", "3", "--hi", "4"});
    CHECK(r.status == 0);
    CHECK(r.out.find("3.03874430") != std::string::npos);
    const auto j = run({"sieve", "--fn", "g1", "--k", "12", "--format", "json"});
    CHECK(j.out.find("\"alpha\":\"11/60\"") != std::string::npos);
}

TEST_CASE("group-count table") {
    const auto r = run({"group-count", "--ell", "5", "--ell", "7", "--k", "12", "--k", "4"});
    CHECK(r.status == 0);
    CHECK(r.out ==
          "ell,k,lambda,orderG,countC1,delta_num,delta_den,brute_match\n"
          "5,12,1,480,115,23,96,true\n"
          "5,4,1,480,115,23,96,true\n"
          "7,12,1,2016,329,47,288,true\n"
          "7,4,3,672,105,5,32,true\n");
}

TEST_CASE("table diff") {
    CHECK(table_diff("a\nb\n", "a\nb\n").empty());
    CHECK(table_diff("a\nb\n", "a\nc\n") == std::vector<std::string>{"-b", "+c"});
    CHECK(table_diff("a\n", "a\nz\n") == std::vector<std::string>{"+z"});
    const std::string_view fx = table71_expected();
    CHECK(fx.find("| 5 | 2^10*3*23*691 |") != std::string_view::npos);
    CHECK(std::count(fx.begin(), fx.end(), '\n') == 12);
}

TEST_CASE("golden table pipeline, warm cache and thread independence") {
    oracle::TempDir dir("cli");
    const auto cold = run({"table-7-1", "--cache-dir", dir.path.string()});
    CHECK(cold.status == 0);
    CHECK(cold.out == table71_expected());
    CHECK(std::filesystem::exists(dir.path / "delta12-N16001.coeffs"));
    const auto warm = run({"table-7-1", "--cache-dir", dir.path.string(), "--threads", "auto"});
    CHECK(warm.status == 0);
    CHECK(warm.out == cold.out);

    const std::vector<std::string> scan = {"np-scan", "--limit", "400", "--cache-dir", dir.path.string()};
    auto a = scan, b = scan;
    b.insert(b.end(), {"--threads", "3"});
    const auto r1 = run(a), r2 = run(a), r3 = run(b);
    CHECK(r1.status == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out == r3.out);
    CHECK(r1.out.rfind("p,Np,omega,big_omega,complete,factorization\n2,2073,2,2,true,3*691\n", 0) == 0);
}

TEST_CASE("scan writes undecided records beside the output") {
    oracle::TempDir dir("scan");
    const auto outfile = (dir.path / "w4.csv").string();
    const auto r = run({"np-scan", "--limit", "2000", "--omega", "4", "--output", outfile, "--cache-dir",
                        dir.path.string()});
    CHECK(r.status == 0);
    std::ifstream main_in(outfile), und_in(outfile + ".undecided.csv");
    REQUIRE(main_in);
    REQUIRE(und_in);
    std::stringstream m, u;
    m << main_in.rdbuf();
    u << und_in.rdbuf();
    CHECK(m.str().find("\n1297,") != std::string::npos);
    CHECK(u.str() == "p,Np,omega,big_omega,complete,factorization\n");
}

TEST_CASE("ingest, store and reuse a coefficient file") {
    oracle::TempDir dir("ingest");
    const auto file = dir.path / "f.coeffs";
    {
        std::ofstream out(file);
        out << "# npf-coeffs v1\n# level=11 weight=4 label=toy11\n2 1\n3 -4\n5 2\n7 -4\n11 11\n";
    }
    const auto r = run({"ingest", "--file", file.string(), "--store", "--cache-dir", dir.path.string()});
    CHECK(r.status == 0);
    CHECK(r.out == "label,level,weight,primes,table_bound,stored\ntoy11,11,4,5,11,true\n");
    const auto rec = run({"np-record", "--form", "toy11", "--p", "3", "--cache-dir", dir.path.string()});
    CHECK(rec.status == 0);
    CHECK(rec.out == "p,Np,omega,big_omega,complete,factorization\n3,32,1,5,true,2^5\n");
    const auto excluded = run({"np-record", "--form", "toy11", "--p", "11", "--cache-dir", dir.path.string()});
    CHECK(excluded.status == 2);

    {
        std::ofstream out(file);
        out << "# npf-coeffs v1\n# level=11 weight=4 label=toy11\n2 12\n";
    }
    const auto bad = run({"ingest", "--file", file.string()});
    CHECK(bad.status == 1);
    CHECK(bad.err.find("line 3") != std::string::npos);
}

TEST_CASE("config file via flag and environment") {
    oracle::TempDir dir("cfg");
    const auto cfg = dir.path / "npf.conf";
    {
        std::ofstream out(cfg);
        out << "output_format=csv\n";
    }
    CHECK(run({"bounds", "--k", "12", "--config", cfg.string()}).out.rfind("k,", 0) == 0);
    CHECK(run({"bounds", "--k", "12"}, {{"NPF_CONFIG", cfg.string()}}).out.rfind("k,", 0) == 0);
    // flag beats file
    CHECK(run({"bounds", "--k", "12", "--config", cfg.string(), "--format", "json"}).out.rfind("{", 0) == 0);
    {
        std::ofstream out(cfg);
        out << "bogus=1\n";
    }
    CHECK(run({"bounds", "--k", "12", "--config", cfg.string()}).status == 2);
}

TEST_CASE("coefficients and Eisenstein primes via the CLI") {
    oracle::TempDir dir("misc");
    const auto c = run({"coeffs", "--n", "5", "--cache-dir", dir.path.string()});
    CHECK(c.out == "n,a_n\n1,1\n2,-24\n3,252\n4,-1472\n5,4830\n");
    const auto e = run({"eisenstein-primes", "--limit", "2000", "--lmax", "10000", "--format", "json", "--cache-dir",
                        dir.path.string()});
    CHECK(e.status == 0);
    CHECK(e.out.find("\"candidates\":[2,3,691],\"nu\":3") != std::string::npos);
    const auto chk = run({"eisenstein-primes", "--check", "7", "--limit", "100", "--cache-dir", dir.path.string()});
    CHECK(chk.status == 1);
    CHECK(chk.out == "ell,upto,first_failure\n7,100,2\n");
    const auto cong = run({"congruence", "--start", "2", "--limit", "4", "--cache-dir", dir.path.string()});
    CHECK(cong.status == 1);
    CHECK(cong.out == "p\n2\n3\n");
}
