#include "estlab/sampling_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "estlab/errors.hpp"
#include "estlab/moments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace estlab {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t st = seed;
    std::uint64_t mixed = splitmix64(st) ^ (stream * 0xD1B54A32D192ED03ULL);
    for (auto& w : s_) w = splitmix64(mixed);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Rng::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::string_view to_string(DesignKind k) noexcept {
    switch (k) {
        case DesignKind::srswor: return "srswor";
        case DesignKind::systematic: return "systematic";
        case DesignKind::srswor_nonresponse: return "srswor-with-nonresponse";
        case DesignKind::two_phase: return "two-phase";
    }
    return "?";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    k = std::min(k, n - k);
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i is exact at every step; guard the product
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(r, i);
        const std::uint64_t rr = r / g, ii = i / g;
        const std::uint64_t nn = num / ii;
        if (rr != 0 && nn > kMax / rr) return kMax;
        r = rr * nn;
    }
    return r;
}

void unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k, std::span<std::size_t> out) {
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
        for (std::size_t v = next; v < n; ++v) {
            const std::uint64_t below = binomial(n - v - 1, k - slot - 1);
            if (rank < below) {
                out[slot] = v;
                next = v + 1;
                break;
            }
            rank -= below;
        }
    }
}

bool next_combination(std::span<std::size_t> c, std::size_t n) noexcept {
    const std::size_t k = c.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::size_t followup_size(std::size_t n2, double L) {
    if (!(L >= 1) || !std::isfinite(L)) fail(ErrorKind::validation, "L must be at least 1");
    if (n2 == 0) return 0;
    const auto h = static_cast<std::size_t>(std::llround(static_cast<double>(n2) / L));
    return std::clamp<std::size_t>(h, 1, n2);
}

double sample_mean(const std::vector<double>& column, std::span<const std::size_t> units) {
    double s = 0;
    for (auto u : units) s += column[u];
    return s / static_cast<double>(units.size());
}

double sample_var(const std::vector<double>& column, std::span<const std::size_t> units) {
    const double m = sample_mean(column, units);
    double s = 0;
    for (auto u : units) s += (column[u] - m) * (column[u] - m);
    return s / static_cast<double>(units.size() - 1);
}

void validate(const DesignSpec& spec, const FinitePopulation& pop) {
    const std::size_t N = pop.size();
    if (spec.n < 1 || spec.n > N) fail(ErrorKind::design, "sample size must lie in [1, N]");
    switch (spec.kind) {
        case DesignKind::systematic:
            if (spec.k && *spec.k * spec.n != N) {
                fail(ErrorKind::design, "systematic design needs N = n k, got N = " + std::to_string(N) +
                                            ", n = " + std::to_string(spec.n) + ", k = " + std::to_string(*spec.k));
            }
            if (N % spec.n != 0) fail(ErrorKind::design, "systematic design needs N to be a multiple of n");
            break;
        case DesignKind::srswor_nonresponse:
            if (!spec.nonresponse) fail(ErrorKind::design, "srswor-with-nonresponse needs an L");
            break;
        case DesignKind::two_phase:
            if (!spec.nPrime || *spec.nPrime <= spec.n || *spec.nPrime > N) {
                fail(ErrorKind::design, "two-phase design needs n < n' <= N");
            }
            if (spec.nonresponse) fail(ErrorKind::design, "two-phase design does not model non-response");
            break;
        case DesignKind::srswor:
            if (spec.nonresponse) fail(ErrorKind::design, "use srswor-with-nonresponse for follow-up subsampling");
            break;
    }
    if (spec.nonresponse) {
        if (!pop.has_responder()) fail(ErrorKind::schema, "non-response design needs a responder column");
        (void)followup_size(1, spec.nonresponse->L);
    }
}

HHDraw hansen_hurwitz_draw(std::span<const double> y, std::span<const int> resp, double L, Rng& rng) {
    if (y.size() != resp.size() || y.empty()) fail(ErrorKind::validation, "sample and responder flags differ in length");
    HHDraw d;
    double sum1 = 0;
    std::vector<double> non;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (resp[i]) {
            sum1 += y[i];
            ++d.n1;
        } else {
            non.push_back(y[i]);
        }
    }
    d.n2 = non.size();
    d.h2 = followup_size(d.n2, L);
    double sum2 = 0;
    for (std::size_t j = 0; j < d.h2; ++j) {
        const std::size_t pick = j + static_cast<std::size_t>(rng.below(d.n2 - j));
        std::swap(non[j], non[pick]);
        sum2 += non[j];
    }
    const double n = static_cast<double>(y.size());
    d.ybarStar = (sum1 + (d.h2 ? static_cast<double>(d.n2) * sum2 / static_cast<double>(d.h2) : 0.0)) / n;
    return d;
}

namespace {

constexpr std::uint64_t kEnumChunk = 4096;
constexpr std::uint64_t kMcChunk = 1024;

std::size_t interval(const DesignSpec& spec, const FinitePopulation& pop) {
    return spec.k ? *spec.k : pop.size() / spec.n;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t outer_count(const FinitePopulation& pop, const DesignSpec& spec) {
    const std::size_t N = pop.size();
    switch (spec.kind) {
        case DesignKind::systematic: return interval(spec, pop);
        case DesignKind::two_phase: return sat_mul(binomial(N, *spec.nPrime), binomial(*spec.nPrime, spec.n));
        default: return binomial(N, spec.n);
    }
}

// Largest number of follow-up subsamples one outer sample can have.
std::uint64_t max_inner(const DesignSpec& spec) {
    if (!spec.nonresponse) return 1;
    std::uint64_t m = 1;
    for (std::size_t n2 = 1; n2 <= spec.n; ++n2) m = std::max(m, binomial(n2, followup_size(n2, spec.nonresponse->L)));
    return m;
}

// Running mean and sum of squared deviations; merged in a fixed order.
struct Welford {
    std::uint64_t n = 0;
    double mean = 0;
    double m2 = 0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    void merge(const Welford& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double tot = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / tot;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / tot;
        n += o.n;
    }
};

struct ExactAcc {
    double sumV = 0;
    double sumD2 = 0;
    std::uint64_t outer = 0;
    std::uint64_t count = 0;
};

struct McAcc {
    Welford v;
    Welford d2;
};

// Evaluates every estimator on one sample, averaging over all follow-up subsamples when non-response is modelled.
class OuterEvaluator {
public:
    OuterEvaluator(const FinitePopulation& pop, const DesignSpec& spec, const std::vector<EstimatorSpec>& est)
        : pop_(pop), spec_(spec), est_(est), mean_(est.size()), d2_(est.size()) {}

    std::uint64_t run(std::span<const std::size_t> units, std::span<const std::size_t> firstPhase,
                      std::vector<ExactAcc>& acc) {
        Draw d{&pop_, units, firstPhase, std::nullopt};
        if (!spec_.nonresponse) {
            for (std::size_t e = 0; e < est_.size(); ++e) {
                const double v = est_[e].fn(d);
                acc[e].sumV += v;
                acc[e].sumD2 += (v - est_[e].target) * (v - est_[e].target);
                acc[e].outer += 1;
                acc[e].count += 1;
            }
            return 1;
        }
        const auto& y = pop_.y();
        const auto& r = pop_.responder();
        double sum1 = 0;
        non_.clear();
        for (auto u : units) {
            if (r[u]) sum1 += y[u];
            else non_.push_back(u);
        }
        const std::size_t n2 = non_.size();
        const std::size_t h2 = followup_size(n2, spec_.nonresponse->L);
        std::fill(mean_.begin(), mean_.end(), 0.0);
        std::fill(d2_.begin(), d2_.end(), 0.0);
        pick_.resize(h2);
        std::iota(pick_.begin(), pick_.end(), std::size_t{0});
        std::uint64_t inner = 0;
        const double n = static_cast<double>(units.size());
        do {
            double sum2 = 0;
            for (auto p : pick_) sum2 += y[non_[p]];
            d.ybarStar = (sum1 + (h2 ? static_cast<double>(n2) * sum2 / static_cast<double>(h2) : 0.0)) / n;
            for (std::size_t e = 0; e < est_.size(); ++e) {
                const double v = est_[e].fn(d);
                mean_[e] += v;
                d2_[e] += (v - est_[e].target) * (v - est_[e].target);
            }
            ++inner;
        } while (h2 > 0 && next_combination(pick_, n2));
        for (std::size_t e = 0; e < est_.size(); ++e) {
            acc[e].sumV += mean_[e] / static_cast<double>(inner);
            acc[e].sumD2 += d2_[e] / static_cast<double>(inner);
            acc[e].outer += 1;
            acc[e].count += inner;
        }
        return inner;
    }

private:
    const FinitePopulation& pop_;
    const DesignSpec& spec_;
    const std::vector<EstimatorSpec>& est_;
    std::vector<double> mean_, d2_;
    std::vector<std::size_t> non_, pick_;
};

void enumerate_chunk(const FinitePopulation& pop, const DesignSpec& spec, const std::vector<EstimatorSpec>& est,
                     std::uint64_t begin, std::uint64_t end, std::vector<ExactAcc>& acc) {
    OuterEvaluator ev(pop, spec, est);
    const std::size_t N = pop.size();
    std::vector<std::size_t> units(spec.n);
    switch (spec.kind) {
        case DesignKind::systematic: {
            const std::size_t k = interval(spec, pop);
            for (std::uint64_t s = begin; s < end; ++s) {
                for (std::size_t j = 0; j < spec.n; ++j) units[j] = static_cast<std::size_t>(s) + j * k;
                ev.run(units, {}, acc);
            }
            break;
        }
        case DesignKind::two_phase: {
            const std::size_t np = *spec.nPrime;
            const std::uint64_t innerCount = binomial(np, spec.n);
            std::vector<std::size_t> first(np), pos(spec.n);
            unrank_combination(begin / innerCount, N, np, first);
            unrank_combination(begin % innerCount, np, spec.n, pos);
            for (std::uint64_t i = begin; i < end; ++i) {
                for (std::size_t j = 0; j < spec.n; ++j) units[j] = first[pos[j]];
                ev.run(units, first, acc);
                if (!next_combination(pos, np)) {
                    std::iota(pos.begin(), pos.end(), std::size_t{0});
                    next_combination(first, N);
                }
            }
            break;
        }
        default: {
            unrank_combination(begin, N, spec.n, units);
            for (std::uint64_t i = begin; i < end; ++i) {
                ev.run(units, {}, acc);
                next_combination(units, N);
            }
            break;
        }
    }
}

// Draws one sample for replicate-specific rng; perm must hold a permutation of 0..N-1 and is restored.
class SampleDrawer {
public:
    SampleDrawer(const FinitePopulation& pop, const DesignSpec& spec) : pop_(pop), spec_(spec), perm_(pop.size()) {
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        units_.resize(spec.n);
        if (spec.kind == DesignKind::two_phase) {
            first_.resize(*spec.nPrime);
            pos_.resize(*spec.nPrime);
        }
    }

    Draw draw(Rng& rng) {
        Draw d{&pop_, {}, {}, std::nullopt};
        switch (spec_.kind) {
            case DesignKind::systematic: {
                const std::size_t k = interval(spec_, pop_);
                const auto s = static_cast<std::size_t>(rng.below(k));
                for (std::size_t j = 0; j < spec_.n; ++j) units_[j] = s + j * k;
                break;
            }
            case DesignKind::two_phase: {
                partial_shuffle(perm_, first_.size(), rng, first_);
                std::iota(pos_.begin(), pos_.end(), std::size_t{0});
                std::vector<std::size_t> pick(spec_.n);
                partial_shuffle(pos_, spec_.n, rng, pick);
                for (std::size_t j = 0; j < spec_.n; ++j) units_[j] = first_[pick[j]];
                d.firstPhase = first_;
                break;
            }
            default: partial_shuffle(perm_, spec_.n, rng, units_); break;
        }
        d.units = units_;
        if (spec_.nonresponse) {
            ys_.resize(spec_.n);
            rs_.resize(spec_.n);
            for (std::size_t j = 0; j < spec_.n; ++j) {
                ys_[j] = pop_.y()[units_[j]];
                rs_[j] = pop_.responder()[units_[j]];
            }
            d.ybarStar = hansen_hurwitz_draw(ys_, rs_, spec_.nonresponse->L, rng).ybarStar;
        }
        return d;
    }

private:
    // First m entries of a uniform random permutation of `a`; `a` is left unchanged.
    void partial_shuffle(std::vector<std::size_t>& a, std::size_t m, Rng& rng, std::vector<std::size_t>& out) {
        swaps_.clear();
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t pick = j + static_cast<std::size_t>(rng.below(a.size() - j));
            std::swap(a[j], a[pick]);
            swaps_.push_back(pick);
            out[j] = a[j];
        }
        for (std::size_t j = m; j-- > 0;) std::swap(a[j], a[swaps_[j]]);
    }

    const FinitePopulation& pop_;
    const DesignSpec& spec_;
    std::vector<std::size_t> perm_, units_, first_, pos_, swaps_;
    std::vector<double> ys_;
    std::vector<int> rs_;
};

void mc_chunk(const FinitePopulation& pop, const DesignSpec& spec, const std::vector<EstimatorSpec>& est,
              std::uint64_t begin, std::uint64_t end, std::vector<McAcc>& acc) {
    SampleDrawer drawer(pop, spec);
    for (std::uint64_t r = begin; r < end; ++r) {
        Rng rng(spec.seed, r);
        const Draw d = drawer.draw(rng);
        for (std::size_t e = 0; e < est.size(); ++e) {
            const double v = est[e].fn(d);
            const double dev = v - est[e].target;
            acc[e].v.add(v);
            acc[e].d2.add(dev * dev);
        }
    }
}

template <class Acc, class ChunkFn>
std::vector<std::vector<Acc>> run_chunks(std::uint64_t total, std::uint64_t chunk, std::size_t nEst, Execution exec,
                                         ChunkFn fn) {
    const std::uint64_t nChunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<Acc>> parts(nChunks, std::vector<Acc>(nEst));
    const auto body = [&](std::uint64_t c) { fn(c * chunk, std::min(total, (c + 1) * chunk), parts[c]); };
    if (exec == Execution::parallel) {
        const auto n = static_cast<std::int64_t>(nChunks);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < n; ++c) body(static_cast<std::uint64_t>(c));
    } else {
        for (std::uint64_t c = 0; c < nChunks; ++c) body(c);
    }
    return parts;
}

}  // namespace

std::uint64_t design_sample_count(const FinitePopulation& pop, const DesignSpec& spec) {
    validate(spec, pop);
    return sat_mul(outer_count(pop, spec), max_inner(spec));
}

std::vector<SimulationResult> enumerate_design(const FinitePopulation& pop, const DesignSpec& spec,
                                               const std::vector<EstimatorSpec>& est, Execution exec) {
    const std::uint64_t total = design_sample_count(pop, spec);
    if (total > spec.enumerationCap) {
        fail(ErrorKind::enumeration_too_large, "design has up to " + std::to_string(total) +
                                                   " samples, above the cap of " + std::to_string(spec.enumerationCap) +
                                                   "; use Monte Carlo instead");
    }
    const std::uint64_t outer = outer_count(pop, spec);
    const auto parts = run_chunks<ExactAcc>(outer, kEnumChunk, est.size(), exec,
                                            [&](std::uint64_t b, std::uint64_t e, std::vector<ExactAcc>& acc) {
                                                enumerate_chunk(pop, spec, est, b, e, acc);
                                            });
    std::vector<SimulationResult> out;
    for (std::size_t e = 0; e < est.size(); ++e) {
        ExactAcc a;
        for (const auto& p : parts) {
            a.sumV += p[e].sumV;
            a.sumD2 += p[e].sumD2;
            a.outer += p[e].outer;
            a.count += p[e].count;
        }
        SimulationResult r;
        r.estimatorId = est[e].id;
        r.mean = a.sumV / static_cast<double>(a.outer);
        r.bias = r.mean - est[e].target;
        r.mse = a.sumD2 / static_cast<double>(a.outer);
        r.count = a.count;
        r.exact = true;
        out.push_back(r);
    }
    return out;
}

SimulationResult enumerate_design(const FinitePopulation& pop, const DesignSpec& spec, const EstimatorSpec& est,
                                  Execution exec) {
    return enumerate_design(pop, spec, std::vector<EstimatorSpec>{est}, exec).front();
}

std::vector<SimulationResult> monte_carlo(const FinitePopulation& pop, const DesignSpec& spec,
                                          const std::vector<EstimatorSpec>& est, Execution exec) {
    validate(spec, pop);
    if (spec.replicates < 2) fail(ErrorKind::validation, "Monte Carlo needs at least 2 replicates");
    const auto parts = run_chunks<McAcc>(spec.replicates, kMcChunk, est.size(), exec,
                                         [&](std::uint64_t b, std::uint64_t e, std::vector<McAcc>& acc) {
                                             mc_chunk(pop, spec, est, b, e, acc);
                                         });
    std::vector<SimulationResult> out;
    for (std::size_t e = 0; e < est.size(); ++e) {
        McAcc a;
        for (const auto& p : parts) {
            a.v.merge(p[e].v);
            a.d2.merge(p[e].d2);
        }
        const double R = static_cast<double>(a.v.n);
        SimulationResult r;
        r.estimatorId = est[e].id;
        r.mean = a.v.mean;
        r.bias = r.mean - est[e].target;
        r.mse = a.d2.mean;
        r.mcStdError = std::sqrt(a.v.m2 / (R - 1) / R);
        r.mseStdError = std::sqrt(a.d2.m2 / (R - 1) / R);
        r.count = a.v.n;
        out.push_back(r);
    }
    return out;
}

SimulationResult monte_carlo(const FinitePopulation& pop, const DesignSpec& spec, const EstimatorSpec& est,
                             Execution exec) {
    return monte_carlo(pop, spec, std::vector<EstimatorSpec>{est}, exec).front();
}

std::vector<IdentityCheck> verify_moment_identities(const FinitePopulation& pop, std::size_t n, std::uint64_t cap) {
    const std::size_t N = pop.size();
    if (N < 4) fail(ErrorKind::design, "moment identities need N >= 4");
    if (n < 1 || n >= N) fail(ErrorKind::design, "moment identities need 1 <= n < N");
    const std::uint64_t total = binomial(N, n);
    if (total > cap) {
        fail(ErrorKind::enumeration_too_large, std::to_string(total) + " subsets exceed the cap of " + std::to_string(cap));
    }
    const auto& x = pop.x();
    const auto& y = pop.y();
    const double X = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(N);
    const double Y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(N);
    const MomentTable m = MomentTable::from_population(pop);
    const DesignCoefficients c = design_coefficients(N, n);

    // E[e0], E[e1], then items (i)-(viii)
    std::array<double, 10> s{};
    std::vector<std::size_t> units(n);
    std::iota(units.begin(), units.end(), std::size_t{0});
    do {
        const double e0 = sample_mean(y, units) / Y - 1;
        const double e1 = sample_mean(x, units) / X - 1;
        const std::array<double, 10> v{e0,           e1,           e0 * e0,      e1 * e1,           e0 * e1,
                                       e1 * e1 * e0, e1 * e1 * e1, e1 * e1 * e1 * e0, e1 * e1 * e1 * e1,
                                       e1 * e1 * e0 * e0};
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += v[i];
    } while (next_combination(units, N));
    for (auto& v : s) v /= static_cast<double>(total);

    const auto C = [&](int p, int q) { return m.at(p, q); };
    const std::array<std::pair<const char*, double>, 10> analytic{{
        {"E[e0] = 0", 0.0},
        {"E[e1] = 0", 0.0},
        {"(i) E[e0^2] = L1 C02", c.L1 * C(0, 2)},
        {"(ii) E[e1^2] = L1 C20", c.L1 * C(2, 0)},
        {"(iii) E[e0 e1] = L1 C11", c.L1 * C(1, 1)},
        {"(iv) E[e1^2 e0] = L2 C21", c.L2 * C(2, 1)},
        {"(v) E[e1^3] = L2 C30", c.L2 * C(3, 0)},
        {"(vi) E[e1^3 e0] = L3 C31 + 3 L4 C20 C11", c.L3 * C(3, 1) + 3 * c.L4 * C(2, 0) * C(1, 1)},
        {"(vii) E[e1^4] = L3 C40 + 3 L4 C20^2", c.L3 * C(4, 0) + 3 * c.L4 * C(2, 0) * C(2, 0)},
        {"(viii) E[e1^2 e0^2] = L3 C22 + L4 (C20 C02 + 2 C11^2)",
         c.L3 * C(2, 2) + c.L4 * (C(2, 0) * C(0, 2) + 2 * C(1, 1) * C(1, 1))},
    }};
    std::vector<IdentityCheck> out;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        IdentityCheck ic{analytic[i].first, analytic[i].second, s[i], 0};
        const double diff = std::abs(ic.analytic - ic.enumerated);
        ic.residual = ic.analytic == 0 ? diff : diff / std::abs(ic.analytic);
        out.push_back(ic);
    }
    return out;
}

}  // namespace estlab
