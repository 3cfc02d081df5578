#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "npf/bernoulli.hpp"
#include "npf/cli.hpp"
#include "npf/error.hpp"
#include "npf/glcount.hpp"
#include "npf/primes.hpp"
#include "npf/sieveeval.hpp"

namespace npf::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr unsigned kShallowBernoulliCeiling = 400;
constexpr std::uint64_t kGoldenLimit = 16000;
constexpr std::uint64_t kMaxBruteEll = 31;

struct Context {
    RunConfig cfg;
    std::ostream& out;
    std::ostream& err;

    Parallelism par() const { return {cfg.threads}; }
    OutputFormat format_or(OutputFormat fallback) const { return cfg.output_format.value_or(fallback); }
};

std::string fixed(double x, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << std::fixed << x;
    return os.str();
}

std::string sci(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

// Rows of (column, cell) pairs rendered as CSV, JSON objects or a markdown table.
using Row = std::vector<std::pair<std::string, json>>;

std::string cell_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_number_float()) return sci(v.get<double>());
    return v.dump();
}

void emit_rows(std::ostream& out, OutputFormat fmt, const std::vector<std::string>& columns,
               const std::vector<Row>& rows) {
    switch (fmt) {
        case OutputFormat::csv: {
            for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
            out << '\n';
            for (const auto& r : rows) {
                for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i].second);
                out << '\n';
            }
            break;
        }
        case OutputFormat::json: {
            json arr = json::array();
            for (const auto& r : rows) {
                json obj = json::object();
                for (const auto& [k, v] : r) obj[k] = v;
                arr.push_back(std::move(obj));
            }
            out << arr.dump() << '\n';
            break;
        }
        case OutputFormat::markdown: {
            out << '|';
            for (const auto& c : columns) out << ' ' << c << " |";
            out << "\n|";
            for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
            out << '\n';
            for (const auto& r : rows) {
                out << '|';
                for (const auto& [k, v] : r) out << ' ' << cell_text(v) << " |";
                out << '\n';
            }
            break;
        }
    }
}

void emit_object(std::ostream& out, OutputFormat fmt, const Row& row) {
    std::vector<std::string> cols;
    for (const auto& [k, v] : row) cols.push_back(k);
    if (fmt == OutputFormat::json) {
        json obj = json::object();
        for (const auto& [k, v] : row) obj[k] = v;
        out << obj.dump() << '\n';
        return;
    }
    emit_rows(out, fmt, cols, {row});
}

// ---- forms -----------------------------------------------------------------

struct FormArgs {
    std::string label = "delta12";
    std::string file;
};

void add_form_options(CLI::App* sub, FormArgs& f) {
    auto* by_label = sub->add_option("--form", f.label, "deltaK for K in {12,16,18,20,22,26}, or a stored label")
                         ->capture_default_str();
    auto* by_file = sub->add_option("--form-file", f.file, "coefficient file to use instead of --form");
    by_label->excludes(by_file);
}

std::optional<int> eigenform_weight_of(const std::string& label) {
    if (label == "delta") return 12;
    if (label.rfind("delta", 0) != 0) return std::nullopt;
    int k = 0;
    const char* b = label.data() + 5;
    const char* e = label.data() + label.size();
    auto [ptr, ec] = std::from_chars(b, e, k);
    if (ec != std::errc{} || ptr != e || !qexp::is_eigenform_weight(k)) return std::nullopt;
    return k;
}

/// Form with coefficients available at least up to index `bound`.
qexp::FormHandle resolve_form(const FormArgs& f, std::uint64_t bound, const RunConfig& cfg) {
    if (!f.file.empty()) return qexp::ingest_form_file(f.file);
    if (auto k = eigenform_weight_of(f.label)) return qexp::cached_eigenform(*k, bound + 1, cfg.cache_dir, cfg.precision_ceiling);
    const auto stored = cfg.cache_dir / (f.label + ".coeffs");
    if (std::filesystem::exists(stored)) return qexp::ingest_form_file(stored);
    throw std::invalid_argument("unknown form '" + f.label + "': not a level-one eigenform label and no " +
                                stored.string() + " (see `npf ingest --store`)");
}

// ---- records ---------------------------------------------------------------

const std::vector<std::string> kRecordColumns = {"p", "Np", "omega", "big_omega", "complete", "factorization"};

Row record_row(const npstats::NpRecord& r, bool with_status) {
    Row row = {{"p", r.p},
               {"Np", r.np.get_str()},
               {"omega", r.omega},
               {"big_omega", r.big_omega},
               {"complete", r.complete},
               {"factorization", r.factorization.render()}};
    if (with_status) row.emplace_back("cofactor_status", std::string(npstats::to_string(r.factorization.cofactor_status)));
    return row;
}

void emit_records(std::ostream& out, OutputFormat fmt, const std::vector<npstats::NpRecord>& records) {
    std::vector<Row> rows;
    for (const auto& r : records) rows.push_back(record_row(r, fmt == OutputFormat::json));
    emit_rows(out, fmt, kRecordColumns, rows);
}

// ---- subcommands -----------------------------------------------------------

struct CoeffsArgs {
    FormArgs form;
    std::uint64_t n = 30;
};

int run_coeffs(Context& ctx, const CoeffsArgs& a) {
    if (a.n < 1) throw std::invalid_argument("--n must be >= 1");
    auto form = resolve_form(a.form, a.n, ctx.cfg);
    const auto table = qexp::hecke_table(form, a.n);
    std::vector<Row> rows;
    for (std::uint64_t n = 1; n <= a.n; ++n) rows.push_back({{"n", n}, {"a_n", table[n].get_str()}});
    emit_rows(ctx.out, ctx.format_or(OutputFormat::csv), {"n", "a_n"}, rows);
    return 0;
}

struct NpRecordArgs {
    FormArgs form;
    std::uint64_t p = 0;
};

int run_np_record(Context& ctx, const NpRecordArgs& a) {
    auto form = resolve_form(a.form, a.p, ctx.cfg);
    const auto rec = npstats::np_record(form, a.p, ctx.cfg.budget());
    emit_records(ctx.out, ctx.format_or(OutputFormat::csv), {rec});
    return rec.complete ? 0 : 1;
}

struct ScanArgs {
    FormArgs form;
    std::uint64_t limit = 0;
    std::optional<unsigned> omega;
    std::optional<unsigned> big_omega;
    bool at_most = false;
    std::string output;
};

int run_np_scan(Context& ctx, const ScanArgs& a) {
    std::optional<npstats::ScanFilter> filter;
    if (a.omega || a.big_omega) {
        filter = npstats::ScanFilter{a.omega ? npstats::CountKind::omega : npstats::CountKind::big_omega,
                                     a.at_most ? npstats::Relation::at_most : npstats::Relation::equal,
                                     a.omega ? *a.omega : *a.big_omega};
    } else if (a.at_most) {
        throw std::invalid_argument("--at-most needs --omega or --big-omega");
    }
    auto form = resolve_form(a.form, a.limit, ctx.cfg);
    const auto result = npstats::scan(form, a.limit, filter, ctx.cfg.budget(), ctx.par());
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);

    if (a.output.empty()) {
        emit_records(ctx.out, fmt, result.records);
        if (!result.undecided.empty()) {
            ctx.err << "undecided records (factorization incomplete, filter not settled):\n";
            emit_records(ctx.err, OutputFormat::csv, result.undecided);
        }
    } else {
        std::ofstream main_out(a.output);
        if (!main_out) throw std::runtime_error("cannot write " + a.output);
        emit_records(main_out, fmt, result.records);
        std::ofstream und(a.output + ".undecided.csv");
        if (!und) throw std::runtime_error("cannot write " + a.output + ".undecided.csv");
        emit_records(und, OutputFormat::csv, result.undecided);
    }
    if (!result.undecided.empty()) {
        ctx.err << result.undecided.size() << " undecided record(s)\n";
        return 1;
    }
    return 0;
}

struct CongruenceArgs {
    FormArgs form;
    std::string modulus = "66336";
    std::uint64_t limit = 10000;
    std::uint64_t start = 5;
};

int run_congruence(Context& ctx, const CongruenceArgs& a) {
    BigInt modulus;
    if (modulus.set_str(a.modulus, 10) != 0 || modulus < 1)
        throw std::invalid_argument("--modulus must be a positive integer");
    auto form = resolve_form(a.form, a.limit, ctx.cfg);
    const auto bad = npstats::congruence_scan(form, modulus, a.limit, a.start);
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);
    if (fmt == OutputFormat::json) {
        json j = {{"modulus", modulus.get_str()}, {"start", a.start}, {"limit", a.limit}, {"violations", bad}};
        ctx.out << j.dump() << '\n';
    } else {
        std::vector<Row> rows;
        for (auto p : bad) rows.push_back({{"p", p}});
        emit_rows(ctx.out, fmt, {"p"}, rows);
    }
    if (!bad.empty()) {
        ctx.err << bad.size() << " prime(s) violate N_p = 0 mod " << modulus.get_str() << '\n';
        return 1;
    }
    return 0;
}

struct GroupArgs {
    std::vector<std::uint64_t> ells;
    std::uint64_t ell_max = 0;
    std::vector<unsigned> ks{12};
    unsigned n = 1;
    bool no_brute = false;
};

int run_group_count(Context& ctx, const GroupArgs& a) {
    std::vector<std::uint64_t> ells = a.ells;
    if (a.ell_max) {
        if (a.ell_max > 0xffffffffull) throw std::invalid_argument("--ell-max too large");
        for (auto p : cached_primes(static_cast<std::uint32_t>(a.ell_max))) ells.push_back(p);
    }
    if (ells.empty()) throw std::invalid_argument("give --ell or --ell-max");
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);
    std::vector<Row> rows;
    bool all_match = true;

    if (a.n == 1) {
        for (auto ell : ells)
            for (unsigned k : a.ks) {
                const glcount::GroupParams gp{ell, k, 1};
                const BigInt order = glcount::order_G(gp), c1 = glcount::count_C1(gp);
                const BigRational d = glcount::delta_density(gp);
                json match = "skipped";
                if (!a.no_brute && ell <= kMaxBruteEll) {
                    const bool ok = BigInt(static_cast<unsigned long>(glcount::brute_count(gp, glcount::C2Variant::eigenvalue_one))) == c1 &&
                                    BigInt(static_cast<unsigned long>(glcount::brute_order(gp))) == order;
                    all_match = all_match && ok;
                    match = ok;
                }
                rows.push_back({{"ell", ell},
                                {"k", k},
                                {"lambda", gp.lambda()},
                                {"orderG", order.get_str()},
                                {"countC1", c1.get_str()},
                                {"delta_num", d.get_num().get_str()},
                                {"delta_den", d.get_den().get_str()},
                                {"brute_match", match}});
            }
        emit_rows(ctx.out, fmt, {"ell", "k", "lambda", "orderG", "countC1", "delta_num", "delta_den", "brute_match"}, rows);
        return all_match ? 0 : 1;
    }

    // n ≥ 2: no closed form to compare against, so report the enumerations side by side
    for (auto ell : ells)
        for (unsigned k : a.ks) {
            const glcount::GroupParams gp{ell, k, a.n};
            const auto order = glcount::brute_order(gp);
            const auto e1 = glcount::brute_count(gp, glcount::C2Variant::eigenvalue_one);
            const auto id = glcount::brute_count(gp, glcount::C2Variant::eigenvalue_one_or_identity_below);
            const auto un = glcount::brute_count(gp, glcount::C2Variant::eigenvalue_one_or_unipotent_below);
            rows.push_back({{"ell", ell},
                            {"k", k},
                            {"n", a.n},
                            {"order", order},
                            {"eigenvalue_one", e1},
                            {"identity_below", id},
                            {"unipotent_below", un},
                            {"ratio_identity", fixed(double(id) / double(order), 6)},
                            {"ratio_unipotent", fixed(double(un) / double(order), 6)}});
        }
    emit_rows(ctx.out, fmt,
              {"ell", "k", "n", "order", "eigenvalue_one", "identity_below", "unipotent_below", "ratio_identity",
               "ratio_unipotent"},
              rows);
    return 0;
}

struct SieveArgs {
    std::string fn;
    std::string threshold;
    std::uint64_t mertens = 0;
    unsigned k = 12;
    double lo = 3;
    double hi = 4;
};

int run_sieve(Context& ctx, const SieveArgs& a) {
    const int modes = !a.fn.empty() + !a.threshold.empty() + (a.mertens != 0);
    if (modes != 1) throw std::invalid_argument("give exactly one of --fn, --threshold, --mertens");
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);
    if (!a.fn.empty()) {
        const auto fam = sieve::parse_family(a.fn);
        const auto fp = sieve::params_family(fam, a.k);
        const double F = sieve::richert_F(fp.numeric());
        const double G = sieve::g_closed(fam, a.k);
        emit_object(ctx.out, fmt,
                    {{"fn", sieve::to_string(fam)},
                     {"k", a.k},
                     {"alpha", fp.alpha.get_str()},
                     {"u", fp.u.get_str()},
                     {"v", fp.v.get_str()},
                     {"lambda", fp.lambda},
                     {"richert_F", F},
                     {"g_closed", G},
                     {"closed_over_F", G / F}});
        return 0;
    }
    if (!a.threshold.empty()) {
        const auto fam = sieve::parse_family(a.threshold);
        const double root = sieve::positivity_threshold(fam, a.lo, a.hi);
        emit_object(ctx.out, fmt, {{"fn", sieve::to_string(fam)}, {"lo", a.lo}, {"hi", a.hi}, {"threshold", fixed(root, 10)}});
        return 0;
    }
    const auto w = sieve::mertens_W(a.mertens, a.k, ctx.par());
    emit_object(ctx.out, fmt, {{"z", a.mertens}, {"k", a.k}, {"W", w.w}, {"W_log_z", w.w_log_z}});
    return 0;
}

int run_bounds(Context& ctx, unsigned k) {
    const auto b = sieve::bounds(k);
    emit_object(ctx.out, ctx.format_or(OutputFormat::json),
                {{"k", b.k},
                 {"omega_bound", b.omega_bound},
                 {"big_omega_bound", b.big_omega_bound},
                 {"grh_omega_bound", b.grh_omega_bound},
                 {"selberg_exponent", b.selberg_exponent}});
    return 0;
}

unsigned bernoulli_ceiling(bool deep) { return deep ? bernoulli::kDefaultCeiling : kShallowBernoulliCeiling; }

int run_bernoulli(Context& ctx, unsigned k, bool deep) {
    const auto e = bernoulli::bk_over_k(k, ctx.cfg.budget(), bernoulli_ceiling(deep));
    emit_object(ctx.out, ctx.format_or(OutputFormat::csv),
                {{"k", e.k},
                 {"B_k", npf::to_string(e.b_k)},
                 {"Bk_over_k", npf::to_string(e.bk_over_k)},
                 {"numerator", e.bk_over_k.get_num().get_str()},
                 {"denominator", e.bk_over_k.get_den().get_str()},
                 {"factorization", e.numerator_factorization.render()},
                 {"complete", e.numerator_factorization.complete()}});
    return e.numerator_factorization.complete() ? 0 : 1;
}

struct ChowlaArgs {
    std::uint64_t p = 0;
    unsigned n = 0;
    unsigned i_max = 0;
    bool deep = false;
};

int run_chowla(Context& ctx, const ChowlaArgs& a) {
    const auto v = bernoulli::chowla_check(a.p, a.n, a.i_max, bernoulli_ceiling(a.deep));
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);
    if (fmt == OutputFormat::json) {
        json steps = json::array();
        for (const auto& s : v.steps) steps.push_back({{"i", s.i}, {"index", s.index}, {"divides", s.divides}});
        json j = {{"p", a.p},
                  {"n", a.n},
                  {"p_divides_numerator", v.p_divides_numerator},
                  {"p_coprime_to_2n_minus_1", v.p_coprime_to_2n_minus_1},
                  {"steps", steps},
                  {"passes", v.passes()}};
        ctx.out << j.dump() << '\n';
    } else {
        std::vector<Row> rows;
        rows.push_back({{"i", 0u}, {"index", a.n}, {"divides", v.p_divides_numerator}});
        for (const auto& s : v.steps) rows.push_back({{"i", s.i}, {"index", s.index}, {"divides", s.divides}});
        emit_rows(ctx.out, fmt, {"i", "index", "divides"}, rows);
        if (!v.p_coprime_to_2n_minus_1) ctx.err << a.p << " divides 2^" << a.n << "-1: hypothesis fails\n";
    }
    if (!v.hypotheses_hold()) ctx.err << "hypotheses do not hold\n";
    return v.passes() ? 0 : 1;
}

struct EisensteinArgs {
    FormArgs form;
    std::uint64_t limit = 2000;
    std::uint64_t lmax = 10000;
    std::uint64_t start = 5;
    std::optional<std::uint64_t> check;
};

int run_eisenstein(Context& ctx, const EisensteinArgs& a) {
    auto form = resolve_form(a.form, a.limit, ctx.cfg);
    const OutputFormat fmt = ctx.format_or(OutputFormat::csv);
    if (a.check) {
        const auto first = bernoulli::eisenstein_congruence_check(form, *a.check, a.limit);
        emit_object(ctx.out, fmt,
                    {{"ell", *a.check}, {"upto", a.limit}, {"first_failure", first ? json(*first) : json(nullptr)}});
        return first ? 1 : 0;
    }
    const auto r = bernoulli::almost_eisenstein(form, a.limit, a.lmax, a.start);
    if (r.superset_warning)
        ctx.err << "warning: only " << r.test_primes << " test primes; candidates are a superset\n";
    if (fmt == OutputFormat::json) {
        json j = {{"form", form.label()},
                  {"limit", a.limit},
                  {"lmax", a.lmax},
                  {"test_primes", r.test_primes},
                  {"candidates", r.candidates},
                  {"nu", r.nu()},
                  {"superset_warning", r.superset_warning}};
        ctx.out << j.dump() << '\n';
    } else {
        std::vector<Row> rows;
        for (auto ell : r.candidates) rows.push_back({{"ell", ell}});
        emit_rows(ctx.out, fmt, {"ell"}, rows);
    }
    return 0;
}

struct ReportArgs {
    unsigned kmax = 0;
    unsigned kmin = 12;
    bool deep = false;
};

int run_bk_report(Context& ctx, const ReportArgs& a) {
    const auto rows_in = bernoulli::omega_numerator_report(a.kmax, ctx.cfg.budget(), bernoulli_ceiling(a.deep), ctx.par(), a.kmin);
    std::vector<Row> rows;
    for (const auto& r : rows_in)
        rows.push_back({{"k", r.k},
                        {"numerator", r.numerator.get_str()},
                        {"complete", r.complete},
                        {"omega", r.complete ? json(r.omega) : json(nullptr)},
                        {"k_over_log_k", fixed(r.k_over_log_k, 6)},
                        {"log_k", fixed(r.log_k, 6)}});
    emit_rows(ctx.out, ctx.format_or(OutputFormat::csv), {"k", "numerator", "complete", "omega", "k_over_log_k", "log_k"}, rows);
    return 0;
}

struct ErdosKacArgs {
    FormArgs form;
    std::uint64_t limit = 100000;
    std::uint32_t y = 10000;
};

int run_erdos_kac(Context& ctx, const ErdosKacArgs& a) {
    auto form = resolve_form(a.form, a.limit, ctx.cfg);
    const auto r = npstats::erdos_kac_sample(form, a.limit, a.y, ctx.par());
    emit_object(ctx.out, ctx.format_or(OutputFormat::csv),
                {{"X", r.X},
                 {"y", r.y},
                 {"sample_size", r.sample_size},
                 {"mean", r.mean},
                 {"variance", r.variance},
                 {"ks_distance", r.ks_distance}});
    return 0;
}

struct IngestArgs {
    std::string file;
    bool store = false;
};

int run_ingest(Context& ctx, const IngestArgs& a) {
    const auto form = qexp::ingest_form_file(a.file);
    if (a.store) {
        std::filesystem::create_directories(ctx.cfg.cache_dir);
        const auto dest = ctx.cfg.cache_dir / (form.label() + ".coeffs");
        std::ofstream out(dest, std::ios::binary | std::ios::trunc);
        qexp::write_coefficient_file(out, form);
        if (!out) throw std::runtime_error("cannot write " + dest.string());
    }
    emit_object(ctx.out, ctx.format_or(OutputFormat::csv),
                {{"label", form.label()},
                 {"level", form.level()},
                 {"weight", form.weight()},
                 {"primes", form.ap_table().size()},
                 {"table_bound", form.table_bound()},
                 {"stored", a.store}});
    return 0;
}

int run_table71(Context& ctx) {
    auto delta = qexp::cached_eigenform(12, kGoldenLimit + 1, ctx.cfg.cache_dir, ctx.cfg.precision_ceiling);
    const npstats::ScanFilter four{npstats::CountKind::omega, npstats::Relation::equal, 4};
    const auto result = npstats::scan(delta, kGoldenLimit, four, ctx.cfg.budget(), ctx.par());
    const std::string actual = render_table71(result.records);
    ctx.out << actual;
    int status = 0;
    if (!result.undecided.empty()) {
        ctx.err << result.undecided.size() << " undecided record(s):\n";
        emit_records(ctx.err, OutputFormat::csv, result.undecided);
        status = 1;
    }
    const auto diff = table_diff(table71_expected(), actual);
    if (!diff.empty()) {
        ctx.err << "table differs from the expected fixture:\n";
        for (const auto& line : diff) ctx.err << line << '\n';
        status = 1;
    }
    return status;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app{"npf: N_p(f) workbench for level-one and ingested newforms"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // Global options, accepted before or after the subcommand.
    std::string config_path, cache_dir, format, threads;
    std::optional<double> seconds;
    std::optional<std::uint32_t> trial;
    std::optional<std::size_t> ceiling;
    app.add_option("--config", config_path, "flat key=value config file (also NPF_CONFIG)");
    app.add_option("--cache-dir", cache_dir, "coefficient cache directory");
    app.add_option("--factor-seconds", seconds, "wall-clock factoring budget per integer");
    app.add_option("--trial-bound", trial, "trial division bound");
    app.add_option("--precision-ceiling", ceiling, "largest q-expansion length accepted");
    app.add_option("--format", format, "csv, json or markdown");
    app.add_option("--threads", threads, "worker threads, or auto");
    app.fallthrough();

    CoeffsArgs coeffs;
    auto* c_coeffs = app.add_subcommand("coeffs", "Fourier coefficients a_1..a_n");
    add_form_options(c_coeffs, coeffs.form);
    c_coeffs->add_option("--n", coeffs.n, "last index")->capture_default_str();

    NpRecordArgs rec;
    auto* c_rec = app.add_subcommand("np-record", "N_p with factorization for one prime");
    add_form_options(c_rec, rec.form);
    c_rec->add_option("--p", rec.p, "prime")->required();

    ScanArgs scan;
    auto* c_scan = app.add_subcommand("np-scan", "N_p records for all good primes p <= limit");
    add_form_options(c_scan, scan.form);
    c_scan->add_option("--limit", scan.limit, "X")->required();
    auto* o_om = c_scan->add_option("--omega", scan.omega, "keep records with omega = T");
    auto* o_bom = c_scan->add_option("--big-omega", scan.big_omega, "keep records with Omega = T");
    o_om->excludes(o_bom);
    c_scan->add_flag("--at-most", scan.at_most, "filter on <= T instead of = T");
    c_scan->add_option("--output", scan.output, "write records here; undecided go to <output>.undecided.csv");

    CongruenceArgs cong;
    auto* c_cong = app.add_subcommand("congruence", "good primes in [start, limit] with N_p not divisible by modulus");
    add_form_options(c_cong, cong.form);
    c_cong->add_option("--modulus", cong.modulus)->capture_default_str();
    c_cong->add_option("--limit", cong.limit)->capture_default_str();
    c_cong->add_option("--start", cong.start)->capture_default_str();

    GroupArgs grp;
    auto* c_grp = app.add_subcommand("group-count", "#G_ell, #C_ell,1 and delta(ell), with brute-force cross-check");
    c_grp->add_option("--ell", grp.ells, "prime(s)");
    c_grp->add_option("--ell-max", grp.ell_max, "all primes up to this bound");
    c_grp->add_option("--k", grp.ks, "weight(s)")->capture_default_str();
    c_grp->add_option("--n", grp.n, "level exponent; n >= 2 reports enumerations only")->capture_default_str();
    c_grp->add_flag("--no-brute", grp.no_brute, "skip enumeration");

    SieveArgs sv;
    auto* c_sieve = app.add_subcommand("sieve", "Richert main term, closed forms, thresholds, W(z)");
    c_sieve->add_option("--fn", sv.fn, "g1, g2 or g3: evaluate at --k");
    c_sieve->add_option("--threshold", sv.threshold, "g1, g2 or g3: root of the closed form in [--lo, --hi]");
    c_sieve->add_option("--mertens", sv.mertens, "z: product over primes below z");
    c_sieve->add_option("--k", sv.k)->capture_default_str();
    c_sieve->add_option("--lo", sv.lo)->capture_default_str();
    c_sieve->add_option("--hi", sv.hi)->capture_default_str();

    unsigned bounds_k = 12;
    auto* c_bounds = app.add_subcommand("bounds", "omega/Omega bound family for weight k");
    c_bounds->add_option("--k", bounds_k)->required();

    unsigned bern_k = 0;
    bool bern_deep = false;
    auto* c_bern = app.add_subcommand("bernoulli", "B_k and the factored numerator of B_k/k");
    c_bern->add_option("--k", bern_k)->required();
    c_bern->add_flag("--deep", bern_deep, "allow k up to 800 (default limit 400)");

    ChowlaArgs ch;
    auto* c_ch = app.add_subcommand("chowla", "p | num(B_{n+(p-1)i}/(n+(p-1)i)) for i = 1..i-max");
    c_ch->add_option("--p", ch.p)->required();
    c_ch->add_option("--n", ch.n)->required();
    c_ch->add_option("--i-max", ch.i_max)->required();
    c_ch->add_flag("--deep", ch.deep, "allow indices up to 800");

    EisensteinArgs eis;
    auto* c_eis = app.add_subcommand("eisenstein-primes", "almost-Eisenstein prime candidates");
    add_form_options(c_eis, eis.form);
    c_eis->add_option("--limit", eis.limit, "X: test primes up to X")->capture_default_str();
    c_eis->add_option("--lmax", eis.lmax, "largest candidate ell")->capture_default_str();
    c_eis->add_option("--start", eis.start, "smallest test prime")->capture_default_str();
    c_eis->add_option("--check", eis.check, "instead: verify a_n = sigma_{k-1}(n) mod ELL for n <= limit");

    ReportArgs rep;
    auto* c_rep = app.add_subcommand("bk-report", "omega(num(B_k/k)) for even k");
    c_rep->add_option("--kmax", rep.kmax)->required();
    c_rep->add_option("--kmin", rep.kmin)->capture_default_str();
    c_rep->add_flag("--deep", rep.deep, "allow k up to 800");

    ErdosKacArgs ek;
    auto* c_ek = app.add_subcommand("erdos-kac", "truncated-omega normality diagnostic");
    add_form_options(c_ek, ek.form);
    c_ek->add_option("--limit", ek.limit)->capture_default_str();
    c_ek->add_option("--y", ek.y)->capture_default_str();

    IngestArgs ing;
    auto* c_ing = app.add_subcommand("ingest", "validate a coefficient file");
    c_ing->add_option("--file", ing.file)->required();
    c_ing->add_flag("--store", ing.store, "copy into the cache directory under its label");

    auto* c_tab = app.add_subcommand("table-7-1", "reproduce the omega(N_p(Delta)) = 4 table for p <= 16000");

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());
    if (cargv.empty()) cargv.push_back("npf");
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        ConfigLayer flags;
        if (!cache_dir.empty()) set_config_key(flags, "cache_dir", cache_dir);
        if (seconds) flags.factor_budget_seconds = *seconds;
        if (trial) flags.trial_bound = *trial;
        if (ceiling) flags.precision_ceiling = *ceiling;
        if (!format.empty()) set_config_key(flags, "output_format", format);
        if (!threads.empty()) set_config_key(flags, "threads", threads);
        if (seconds && !(*seconds > 0)) throw ConfigError("--factor-seconds must be positive");
        if ((trial && *trial == 0) || (ceiling && *ceiling == 0)) throw ConfigError("bounds must be positive");

        ConfigLayer file;
        if (config_path.empty())
            if (auto p = env("NPF_CONFIG")) config_path = *p;
        if (!config_path.empty()) file = load_config_file(config_path);

        Context ctx{resolve_config(flags, environment_layer(env), file), out, err};

        if (*c_coeffs) return run_coeffs(ctx, coeffs);
        if (*c_rec) return run_np_record(ctx, rec);
        if (*c_scan) return run_np_scan(ctx, scan);
        if (*c_cong) return run_congruence(ctx, cong);
        if (*c_grp) return run_group_count(ctx, grp);
        if (*c_sieve) return run_sieve(ctx, sv);
        if (*c_bounds) return run_bounds(ctx, bounds_k);
        if (*c_bern) return run_bernoulli(ctx, bern_k, bern_deep);
        if (*c_ch) return run_chowla(ctx, ch);
        if (*c_eis) return run_eisenstein(ctx, eis);
        if (*c_rep) return run_bk_report(ctx, rep);
        if (*c_ek) return run_erdos_kac(ctx, ek);
        if (*c_ing) return run_ingest(ctx, ing);
        if (*c_tab) return run_table71(ctx);
        err << "no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace npf::cli
