#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "estlab/attribute_estimators.hpp"
#include "estlab/core_model.hpp"
#include "estlab/csv_io.hpp"
#include "estlab/datasets.hpp"
#include "estlab/dual_ratio_product.hpp"
#include "estlab/errors.hpp"
#include "estlab/moments.hpp"
#include "estlab/render.hpp"
#include "estlab/reproduction.hpp"
#include "estlab/sampling_oracle.hpp"
#include "estlab/second_order_family.hpp"
#include "estlab/systematic_nonresponse.hpp"
#include "estlab/variance_estimators.hpp"

using namespace estlab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitReproduction = 3;
constexpr int kExitIo = 4;

struct Globals {
    std::string input;
    std::string schema;
    std::string divisor = "n-1";
    std::uint64_t seed = 42;
    std::uint64_t replicates = 10000;
    std::string format = "text";
    std::string out;
    std::string profile = "default";
    std::string dataset;
};

struct ChapterOpts {
    std::string chapter;
    std::vector<double> alpha;
    double w2 = 0;
    double bigL = 2;
    std::optional<double> theta;
    std::optional<std::size_t> n;
    std::optional<std::size_t> nPrime;
    std::string mode = "grid";
    std::optional<double> c20;
};

struct DesignOpts {
    std::string design = "srswor";
    std::size_t n = 0;
    std::optional<std::size_t> k;
    std::optional<std::size_t> nPrime;
    std::optional<double> bigL;
    std::vector<std::string> estimators{"mean"};
    bool serial = false;
    std::uint64_t cap = 10'000'000;
};

double population_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

Divisor divisor_of(const Globals& g) { return g.divisor == "n" ? Divisor::N : Divisor::NMinus1; }

void emit(const Table& t, const Globals& g) {
    render_to(t, format_from_string(g.format), g.out.empty() ? std::nullopt : std::optional<std::string>(g.out));
}

FinitePopulation input_population(const Globals& g) {
    if (!g.input.empty()) return load_population(g.input, parse_schema(g.schema));
    if (!g.dataset.empty()) {
        const auto& d = builtin_dataset(g.dataset);
        if (!d.raw) fail(ErrorKind::incomplete_input, "dataset " + d.id + " has no unit-level data; use --input");
        return FinitePopulation(*d.raw);
    }
    fail(ErrorKind::validation, "this command needs --input PATH or --dataset ID");
}

Table dataset_table(const DatasetDescriptor& d) {
    Table t;
    t.title = d.id + ": " + d.title + " [" + d.source + "]";
    t.columns = {"key", "value", "citation", "calibrated", "note"};
    for (const auto& c : d.constants) t.rows.push_back({c.key, c.value, c.citation, c.calibrated, c.note});
    for (const auto& note : d.notes) t.rows.push_back({std::string("note"), Value(), std::string(), false, note});
    return t;
}

int cmd_dataset(const Globals& g, const std::string& id) {
    if (id.empty()) {
        Table t;
        t.title = "builtin datasets";
        t.columns = {"id", "title", "source", "raw"};
        for (const auto& k : builtin_dataset_ids()) {
            const auto& d = builtin_dataset(k);
            t.rows.push_back({d.id, d.title, d.source, d.raw.has_value()});
        }
        emit(t, g);
        return 0;
    }
    emit(dataset_table(builtin_dataset(id)), g);
    return 0;
}

int cmd_summarize(const Globals& g) {
    if (g.input.empty() && !g.dataset.empty() && !builtin_dataset(g.dataset).raw) {
        emit(dataset_table(builtin_dataset(g.dataset)), g);
        return 0;
    }
    const FinitePopulation pop = input_population(g);
    Table t;
    t.title = "population summary (divisor " + g.divisor + ")";
    t.columns = {"statistic", "value"};
    const auto add = [&](const std::string& k, double v) { t.rows.push_back({k, v}); };
    t.rows.push_back({std::string("N"), static_cast<std::int64_t>(pop.size())});
    const SummaryStats s = summarize_numeric(pop, divisor_of(g));
    add("meanY", s.meanY);
    add("varY", s.varY);
    add("cvY", s.cvY);
    if (s.has_x) {
        add("meanX", s.meanX);
        add("varX", s.varX);
        add("cvX", s.cvX);
        add("rhoYX", s.rhoYX);
    }
    if (s.has_z) {
        add("meanZ", s.meanZ);
        add("varZ", s.varZ);
        add("cvZ", s.cvZ);
        add("rhoYZ", s.rhoYZ);
        if (s.has_x) add("rhoZX", s.rhoZX);
    }
    if (pop.has_phi()) {
        const AttributeSummary a = summarize_attributes(pop, divisor_of(g));
        add("P1", a.P1);
        add("P2", a.P2);
        add("varPhi1", a.varPhi1);
        add("varPhi2", a.varPhi2);
        add("rhoPb1", a.rhoPb1);
        add("rhoPb2", a.rhoPb2);
        add("rhoPhi", a.rhoPhi);
    }
    emit(t, g);
    return 0;
}

VarOptimaMode var_mode(const std::string& m) {
    if (m == "as-printed") return VarOptimaMode::as_printed;
    if (m == "grid") return VarOptimaMode::grid;
    if (m == "joint") return VarOptimaMode::joint;
    fail(ErrorKind::validation, "unknown --mode '" + m + "' (expected as-printed, grid or joint)");
}

OptimaMode attr_mode(const std::string& m) {
    if (m == "as-printed") return OptimaMode::as_printed;
    if (m == "grid" || m == "minimizing") return OptimaMode::minimizing;
    fail(ErrorKind::validation, "unknown --mode '" + m + "' (expected as-printed or grid)");
}

// ch1

NonResponseSpec ch1_nonresponse(const ChapterOpts& o) {
    NonResponseSpec nr{o.w2, o.bigL, builtin_dataset("ch1-murthy").at("S_Y2sq")};
    validate(nr);
    return nr;
}

int report_ch1(const Globals& g, const ChapterOpts& o) {
    const SystematicSummary s(murthy_systematic_inputs());
    const NonResponseSpec nr = ch1_nonresponse(o);
    Table t;
    t.title = "systematic sampling with non-response, W2=" + shortest_repr(o.w2) + ", L=" + shortest_repr(o.bigL);
    t.columns = {"estimator", "alpha", "phi", "bias1", "mse1"};
    const std::vector<double> alphas = o.alpha.empty() ? std::vector<double>{1, 2, 3, 4} : o.alpha;
    for (double a : alphas) {
        const FactorReport r = factor_report(a, s, nr);
        t.rows.push_back({std::string("T_alpha"), a, r.params.phi, r.bias1, r.mse1});
    }
    for (const auto& r : sys_classical_report(s, nr)) {
        t.rows.push_back({std::string(to_string(r.estimator)), Value(), Value(),
                          r.bias1 ? Value(*r.bias1) : Value(), r.mse1});
    }
    const AlphaOptimum opt = alpha_optimum(s, nr);
    t.rows.push_back({std::string("T_alpha optimum"), opt.chosen, opt.target, Value(), opt.minMse});
    emit(t, g);
    return 0;
}

int optimize_ch1(const Globals& g, const ChapterOpts& o) {
    const SystematicSummary s(murthy_systematic_inputs());
    const AlphaOptimum opt = alpha_optimum(s, ch1_nonresponse(o));
    Table t;
    t.title = "optimum alpha: phi(alpha) = rho* K = " + shortest_repr(opt.target);
    t.columns = {"root", "admissible", "chosen", "phi", "mse1"};
    for (double r : opt.allRoots) {
        const bool ok = std::find(opt.roots.begin(), opt.roots.end(), r) != opt.roots.end();
        t.rows.push_back({r, ok, ok && r == opt.chosen, factor_phi(r, s.f()),
                          ok ? Value(factor_report(r, s, ch1_nonresponse(o)).mse1) : Value()});
    }
    emit(t, g);
    return 0;
}

// ch2

struct Ch2Inputs {
    AttributeSummary s;
    double f1 = 0;
};

Ch2Inputs ch2_inputs(const Globals& g, const ChapterOpts& o) {
    Ch2Inputs in;
    in.s = g.input.empty() ? pakrice_summary() : summarize_attributes(input_population(g), divisor_of(g));
    if (!o.n && !g.input.empty()) fail(ErrorKind::validation, "--n is required with --input");
    in.f1 = design_coefficients(in.s.N, o.n.value_or(16)).f1;
    return in;
}

int report_ch2(const Globals& g, const ChapterOpts& o) {
    const Ch2Inputs in = ch2_inputs(g, o);
    const AttrOptima opt = attr_optima(in.s, in.f1, in.s.meanY, attr_mode(o.mode));
    Table t;
    t.title = "mean estimation with two auxiliary attributes (" + o.mode + " optima)";
    t.columns = {"estimator", "bias1", "mse1", "pre"};
    for (const auto& r : attr_report(in.s, in.f1, in.s.meanY, opt.params)) {
        t.rows.push_back({std::string(to_string(r.estimator)), r.bias1, r.mse1, r.pre});
    }
    emit(t, g);
    return 0;
}

int optimize_ch2(const Globals& g, const ChapterOpts& o) {
    const Ch2Inputs in = ch2_inputs(g, o);
    const AttrOptima opt = attr_optima(in.s, in.f1, in.s.meanY, attr_mode(o.mode));
    Table t;
    t.title = "attribute estimator constants (" + o.mode + ")";
    t.columns = {"parameter", "value"};
    t.rows = {{std::string("w1"), opt.params.w1()},   {std::string("w2"), opt.params.w2()},
              {std::string("K61"), opt.params.K61},   {std::string("K62"), opt.params.K62},
              {std::string("K71"), opt.params.K71},   {std::string("K72"), opt.params.K72},
              {std::string("mse t5"), opt.mse_t5},    {std::string("mse t6"), opt.mse_t6},
              {std::string("mse t7"), opt.mse_t7}};
    emit(t, g);
    return 0;
}

// ch3

struct Ch3Inputs {
    MomentTable m;
    DesignCoefficients c;
    double meanY = 0;
};

Ch3Inputs ch3_inputs(const Globals& g, const ChapterOpts& o) {
    if (!g.input.empty()) {
        if (!o.n) fail(ErrorKind::validation, "--n is required with --input");
        const FinitePopulation pop = input_population(g);
        return {MomentTable::from_population(pop), design_coefficients(pop.size(), *o.n), population_mean(pop.y())};
    }
    const auto& d = builtin_dataset("ch3-aligarh");
    const double c20 = o.c20.value_or(backsolve_c20(39.217225));
    return {aligarh_moments(c20),
            design_coefficients(static_cast<std::size_t>(d.at("N")), o.n.value_or(static_cast<std::size_t>(d.at("n")))),
            d.at("meanY")};
}

int report_ch3(const Globals& g, const ChapterOpts& o, bool optimaOnly) {
    const Ch3Inputs in = ch3_inputs(g, o);
    Table t;
    t.title = "five mean-estimator families at their first-order optimum";
    t.columns = optimaOnly ? std::vector<std::string>{"estimator", "free parameter", "mse1"}
                           : std::vector<std::string>{"estimator", "free parameter", "bias1", "mse1", "bias2", "mse2"};
    for (MeanEstimator e : {MeanEstimator::t1, MeanEstimator::t2, MeanEstimator::t3, MeanEstimator::t4,
                            MeanEstimator::t5}) {
        MeanFamilyParams fixed;
        fixed.estimator = e;
        const FamilyOptimum opt = family_optimum(in.m, in.c, in.meanY, fixed);
        const std::string id(to_string(e));
        if (optimaOnly) {
            t.rows.push_back({id, opt.parameter, opt.mse1});
            continue;
        }
        const BiasMse r1 = first_order_report(in.m, in.c, in.meanY, opt.params);
        const BiasMse r2 = second_order_report(in.m, in.c, in.meanY, opt.params);
        t.rows.push_back({id, opt.parameter, r1.bias, r1.mse, r2.bias, r2.mse});
    }
    emit(t, g);
    return 0;
}

// ch4

struct Ch4Inputs {
    SummaryStats s;
    DesignCoefficients c;
};

Ch4Inputs ch4_inputs(const Globals& g, const ChapterOpts& o) {
    if (!g.input.empty()) {
        if (!o.n) fail(ErrorKind::validation, "--n is required with --input");
        const SummaryStats s = summarize_numeric(input_population(g), divisor_of(g));
        return {s, design_coefficients(s.N, *o.n)};
    }
    const std::string id = g.dataset.empty() ? "ch4-pop2" : g.dataset;
    const auto& d = builtin_dataset(id);
    const SummaryStats s = ch4_summary(id, d.raw ? SummarySource::printed_corrected : SummarySource::printed);
    return {s, design_coefficients(s.N, o.n.value_or(static_cast<std::size_t>(d.at("n"))))};
}

int report_ch4(const Globals& g, const ChapterOpts& o) {
    const Ch4Inputs in = ch4_inputs(g, o);
    Table t;
    t.title = "ratio, product and dual estimators";
    t.columns = {"estimator", "mse1", "pre", "bias1"};
    for (const auto& r : classical_report(in.s, in.c)) {
        t.rows.push_back({std::string(to_string(r.estimator)), r.mse1, r.pre, Value()});
    }
    const QuadraticSummary q = pr_optimum(in.s, in.c);
    const PRReport pr = pr_report(in.s, in.c, DualPRParams{o.theta.value_or(q.theta0)});
    const double base = classical_mse(ClassicalEstimator::mean, in.s, in.c.lambda, in.c.g);
    t.rows.push_back({std::string("PR theta=") + shortest_repr(o.theta.value_or(q.theta0)), pr.mse1,
                      pre(base, pr.mse1), pr.bias1});
    emit(t, g);
    return 0;
}

int optimize_ch4(const Globals& g, const ChapterOpts& o) {
    const Ch4Inputs in = ch4_inputs(g, o);
    const QuadraticSummary q = pr_optimum(in.s, in.c);
    Table t;
    t.title = "optimum theta for the dual ratio-cum-product estimator";
    t.columns = {"quantity", "value"};
    t.rows = {{std::string("theta0"), q.theta0}, {std::string("min mse"), q.minMse},
              {std::string("C"), q.C},           {std::string("D"), q.D},
              {std::string("C*"), q.Cstar},      {std::string("D*"), q.Dstar},
              {std::string("E"), q.E},           {std::string("F"), q.F}};
    emit(t, g);
    return 0;
}

// ch5

struct Ch5Inputs {
    PartialMomentTable t;
    int n = 0;
    int nPrime = 0;
};

Ch5Inputs ch5_inputs(const Globals& g, const ChapterOpts& o) {
    const auto& d = builtin_dataset("ch5-murthy67");
    Ch5Inputs in;
    in.t = g.input.empty() ? murthy67_moments() : PartialMomentTable::from_population(input_population(g));
    in.n = static_cast<int>(o.n.value_or(static_cast<std::size_t>(d.at("n"))));
    in.nPrime = static_cast<int>(o.nPrime.value_or(static_cast<std::size_t>(d.at("nPrime"))));
    return in;
}

int report_ch5(const Globals& g, const ChapterOpts& o) {
    const Ch5Inputs in = ch5_inputs(g, o);
    const VarOptima opt = var_optima(in.t, in.n, in.nPrime, var_mode(o.mode));
    Table t;
    t.title = "variance estimators, n=" + std::to_string(in.n) + ", n'=" + std::to_string(in.nPrime) + " (" + o.mode +
              " optima)";
    t.columns = {"estimator", "phase", "mse (S_y^4 units)", "pre"};
    for (const auto& r : var_single_report(in.t, in.n, opt)) t.rows.push_back({r.id, std::string("single"), r.mse, r.pre});
    for (const auto& r : var_twophase_report(in.t, in.n, in.nPrime, opt)) {
        if (r.id != "s_y^2") t.rows.push_back({r.id, std::string("two-phase"), r.mse, r.pre});
    }
    emit(t, g);
    return 0;
}

int optimize_ch5(const Globals& g, const ChapterOpts& o) {
    const Ch5Inputs in = ch5_inputs(g, o);
    const VarOptima opt = var_optima(in.t, in.n, in.nPrime, var_mode(o.mode));
    Table t;
    t.title = "variance estimator constants (" + o.mode + ")";
    t.columns = {"parameter", "value"};
    const auto add = [&](const std::string& k, double v) { t.rows.push_back({k, v}); };
    add("x1 (t5)", opt.single.x1());
    add("x2 (t6)", opt.single.x2());
    add("k4", opt.single.k4);
    add("k7", opt.singleT7.k7);
    add("x1 (t7)", opt.singleT7.x1());
    add("x2 (t7)", opt.singleT7.x2());
    add("x1' (t5')", opt.twoPhase.x1());
    add("x2' (t6')", opt.twoPhase.x2());
    add("k4'", opt.twoPhase.k4Prime);
    add("k7'", opt.twoPhaseT7.k7Prime);
    add("x1' (t7')", opt.twoPhaseT7.x1());
    add("x2' (t7')", opt.twoPhaseT7.x2());
    emit(t, g);
    return 0;
}

int cmd_chapter(const Globals& g, const ChapterOpts& o, bool optimize) {
    if (o.chapter == "ch1") return optimize ? optimize_ch1(g, o) : report_ch1(g, o);
    if (o.chapter == "ch2") return optimize ? optimize_ch2(g, o) : report_ch2(g, o);
    if (o.chapter == "ch3") return report_ch3(g, o, optimize);
    if (o.chapter == "ch4") return optimize ? optimize_ch4(g, o) : report_ch4(g, o);
    if (o.chapter == "ch5") return optimize ? optimize_ch5(g, o) : report_ch5(g, o);
    fail(ErrorKind::unknown_id, "unknown chapter '" + o.chapter + "' (expected ch1 ... ch5)");
}

int cmd_reproduce(const Globals& g, const std::string& id) {
    const ToleranceProfile profile = load_profile(g.profile);
    const std::vector<std::string> ids = id == "all" ? reproducible_tables() : std::vector<std::string>{id};
    bool ok = true;
    Table all;
    for (const auto& tid : ids) {
        const ReproductionReport r = reproduce_table(tid, profile);
        ok = ok && r.passed();
        Table t = to_table(r);
        if (format_from_string(g.format) == Format::text) {
            render(t, Format::text, std::cout);
            std::cout << (r.passed() ? "PASSED" : "FAILED") << "\n\n";
            continue;
        }
        if (all.columns.empty()) {
            all.columns = t.columns;
            all.columns.insert(all.columns.begin(), "table");
        }
        for (auto& row : t.rows) {
            row.insert(row.begin(), Value(tid));
            all.rows.push_back(std::move(row));
        }
    }
    if (format_from_string(g.format) != Format::text) emit(all, g);
    return ok ? 0 : kExitReproduction;
}

// enumerate / simulate

DesignKind design_kind(const std::string& s) {
    if (s == "srswor") return DesignKind::srswor;
    if (s == "systematic") return DesignKind::systematic;
    if (s == "srswor-nr") return DesignKind::srswor_nonresponse;
    if (s == "two-phase") return DesignKind::two_phase;
    fail(ErrorKind::validation, "unknown --design '" + s + "' (expected srswor, systematic, srswor-nr, two-phase)");
}

EstimatorSpec make_estimator(const std::string& name, const FinitePopulation& pop, const DesignSpec& spec) {
    const double Y = population_mean(pop.y());
    const auto ybar = [](const Draw& d) { return d.ybarStar ? *d.ybarStar : sample_mean(d.pop->y(), d.units); };
    if (name == "mean") return {name, ybar, Y};
    if (name == "var") {
        double ss = 0;
        for (double v : pop.y()) ss += (v - Y) * (v - Y);
        return {name, [](const Draw& d) { return sample_var(d.pop->y(), d.units); },
                ss / static_cast<double>(pop.size() - 1)};
    }
    const double X = population_mean(pop.x());
    if (name == "ratio") return {name, [=](const Draw& d) { return ybar(d) * X / sample_mean(d.pop->x(), d.units); }, Y};
    if (name == "product") return {name, [=](const Draw& d) { return ybar(d) * sample_mean(d.pop->x(), d.units) / X; }, Y};
    if (name == "two-phase-ratio") {
        return {name,
                [=](const Draw& d) {
                    return ybar(d) * sample_mean(d.pop->x(), d.firstPhase) / sample_mean(d.pop->x(), d.units);
                },
                Y};
    }
    if (name.rfind("factor:", 0) == 0) {
        const double alpha = parse_number(name.substr(7), 0, "--estimators");
        const double f = static_cast<double>(spec.n) / static_cast<double>(pop.size());
        (void)factor_coefficients(alpha, f);
        return {name, [=](const Draw& d) { return factor_point(ybar(d), sample_mean(d.pop->x(), d.units), X, alpha, f); },
                Y};
    }
    fail(ErrorKind::unknown_id, "unknown estimator '" + name +
                                    "' (expected mean, var, ratio, product, two-phase-ratio, factor:ALPHA)");
}

int cmd_design(const Globals& g, const DesignOpts& o, bool simulate) {
    const FinitePopulation pop = input_population(g);
    DesignSpec spec;
    spec.kind = design_kind(o.design);
    spec.n = o.n;
    spec.k = o.k;
    spec.nPrime = o.nPrime;
    if (o.bigL || spec.kind == DesignKind::srswor_nonresponse) spec.nonresponse = NonResponseDesign{o.bigL.value_or(2)};
    spec.seed = g.seed;
    spec.replicates = g.replicates;
    spec.enumerationCap = o.cap;
    validate(spec, pop);
    std::vector<EstimatorSpec> est;
    for (const auto& e : o.estimators) est.push_back(make_estimator(e, pop, spec));
    const Execution exec = o.serial ? Execution::serial : Execution::parallel;
    const auto results = simulate ? monte_carlo(pop, spec, est, exec) : enumerate_design(pop, spec, est, exec);
    Table t;
    t.title = std::string(simulate ? "Monte Carlo" : "exact enumeration") + ", design " + o.design +
              (simulate ? ", seed " + std::to_string(g.seed) : "");
    t.columns = {"estimator", "target", "mean", "bias", "mse", "mc_se", "mse_se", "samples", "exact"};
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        t.rows.push_back({r.estimatorId, est[i].target, r.mean, r.bias, r.mse, r.mcStdError, r.mseStdError,
                          static_cast<std::int64_t>(r.count), r.exact});
    }
    emit(t, g);
    return 0;
}

void add_chapter_flags(CLI::App* sub, ChapterOpts& o) {
    sub->add_option("chapter", o.chapter, "ch1, ch2, ch3, ch4 or ch5")->required();
    sub->add_option("--alpha", o.alpha, "factor-type alpha values (ch1)")->delimiter(',');
    sub->add_option("--w2", o.w2, "non-response stratum weight (ch1)")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--bigL", o.bigL, "inverse follow-up fraction (ch1)");
    sub->add_option("--theta", o.theta, "dual ratio-cum-product weight (ch4); defaults to the optimum");
    sub->add_option("--n", o.n, "sample size");
    sub->add_option("--n-prime", o.nPrime, "first-phase sample size (ch5)");
    sub->add_option("--mode", o.mode, "optimum mode: as-printed, grid (minimizing) or joint (ch5)");
    sub->add_option("--c20", o.c20, "C20 for the builtin ch3 moments; defaults to the back-solved value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"estlab: finite-population estimators, exact enumeration and table reproduction"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--input", g.input, "CSV population file");
    app.add_option("--schema", g.schema, "role mapping y=COL,x=COL,z=COL,phi1=COL,phi2=COL,responder=COL,stratum=COL");
    app.add_option("--dataset", g.dataset, "builtin dataset id");
    app.add_option("--divisor", g.divisor, "variance divisor")->check(CLI::IsMember({"n", "n-1"}));
    app.add_option("--seed", g.seed, "Monte Carlo seed")->envname("ESTLAB_SEED");
    app.add_option("--replicates", g.replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "csv", "jsonl"}));
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--profile", g.profile, "tolerance profile: default, strict or a JSON file");

    std::string datasetId;
    auto* dataset = app.add_subcommand("dataset", "list builtin datasets or dump one with citations");
    dataset->add_option("id", datasetId);

    auto* summarize = app.add_subcommand("summarize", "population summary of --input or --dataset");

    ChapterOpts reportOpts, optimizeOpts;
    auto* report = app.add_subcommand("report", "bias, MSE and PRE for a chapter's estimators");
    add_chapter_flags(report, reportOpts);
    auto* optimize = app.add_subcommand("optimize", "optimum constants for a chapter's estimators");
    add_chapter_flags(optimize, optimizeOpts);

    std::string tableId;
    auto* reproduce = app.add_subcommand("reproduce", "compare computed tables with the tabulated values");
    reproduce->add_option("table", tableId, "table id or 'all'")->required();

    DesignOpts enumOpts, simOpts;
    const auto add_design_flags = [](CLI::App* sub, DesignOpts& o) {
        sub->add_option("--design", o.design, "srswor, systematic, srswor-nr or two-phase");
        sub->add_option("--n", o.n, "(second-phase) sample size")->required();
        sub->add_option("--k", o.k, "systematic interval");
        sub->add_option("--n-prime", o.nPrime, "first-phase sample size");
        sub->add_option("--bigL", o.bigL, "Hansen-Hurwitz inverse follow-up fraction");
        sub->add_option("--estimators", o.estimators, "mean, var, ratio, product, two-phase-ratio, factor:ALPHA")
            ->delimiter(',');
        sub->add_flag("--serial", o.serial, "run the serial reference kernel");
        sub->add_option("--cap", o.cap, "maximum number of enumerated samples");
    };
    auto* enumerate = app.add_subcommand("enumerate", "exact design expectations by enumerating every sample");
    add_design_flags(enumerate, enumOpts);
    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo over the design");
    add_design_flags(simulate, simOpts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*dataset) return cmd_dataset(g, datasetId);
        if (*summarize) return cmd_summarize(g);
        if (*report) return cmd_chapter(g, reportOpts, false);
        if (*optimize) return cmd_chapter(g, optimizeOpts, true);
        if (*reproduce) return cmd_reproduce(g, tableId);
        if (*enumerate) return cmd_design(g, enumOpts, false);
        if (*simulate) return cmd_design(g, simOpts, true);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == ErrorKind::io ? kExitIo : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
