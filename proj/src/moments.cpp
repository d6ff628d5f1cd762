#include "estlab/moments.hpp"

#include <cmath>
#include <numeric>

#include "estlab/errors.hpp"

namespace estlab {

namespace {

std::string cname(int p, int q) {
    return "C_" + std::to_string(p) + std::to_string(q);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Divisor-N central product moment of a^p b^q.
double central(const std::vector<double>& a, double ma, int p, const std::vector<double>& b, double mb, int q) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(a[i] - ma, p) * std::pow(b[i] - mb, q);
    return s / static_cast<double>(a.size());
}

}  // namespace

MomentTable::MomentTable(MomentSource source) : source_(source) {
    entries_[{0, 0}] = 1.0;
}

MomentTable MomentTable::from_population(const FinitePopulation& pop) {
    MomentTable t(MomentSource::raw_data);
    for (int p = 0; p <= 4; ++p) {
        for (int q = 0; p + q <= 4; ++q) t.entries_[{p, q}] = cpq(pop, p, q);
    }
    return t;
}

void MomentTable::set(int p, int q, double value) {
    if (p < 0 || q < 0 || p + q > 4) fail(ErrorKind::validation, cname(p, q) + " is outside p + q <= 4");
    entries_[{p, q}] = value;
}

bool MomentTable::contains(int p, int q) const {
    return entries_.count({p, q}) != 0;
}

double MomentTable::at(int p, int q) const {
    const auto it = entries_.find({p, q});
    if (it == entries_.end()) fail(ErrorKind::incomplete_input, cname(p, q) + " is missing from the moment table");
    return it->second;
}

double cpq(const FinitePopulation& pop, int p, int q) {
    if (p < 0 || q < 0 || p + q > 4) fail(ErrorKind::validation, cname(p, q) + " is outside p + q <= 4");
    const auto& x = pop.x();
    const auto& y = pop.y();
    const double mx = mean_of(x);
    const double my = mean_of(y);
    if ((p > 0 && mx == 0) || (q > 0 && my == 0)) {
        fail(ErrorKind::degenerate_moment, cname(p, q) + " divides by a zero mean");
    }
    return central(x, mx, p, y, my, q) / (std::pow(mx, p) * std::pow(my, q));
}

PartialMomentTable::PartialMomentTable(MomentSource source) : source_(source) {}

PartialMomentTable PartialMomentTable::from_population(const FinitePopulation& pop, int max_order) {
    PartialMomentTable t(MomentSource::raw_data);
    for (int p = 0; p <= max_order; ++p) {
        for (int q = 0; p + q <= max_order; ++q) {
            for (int r = 0; p + q + r <= max_order; ++r) t.entries_[{p, q, r}] = partial_pqr(pop, p, q, r);
        }
    }
    return t;
}

void PartialMomentTable::set(int p, int q, int r, double value) {
    entries_[{p, q, r}] = value;
}

void PartialMomentTable::set_starred(int p, int q, int r, double starred_value) {
    entries_[{p, q, r}] = starred_value + 1.0;
}

bool PartialMomentTable::contains(int p, int q, int r) const {
    return entries_.count({p, q, r}) != 0;
}

double PartialMomentTable::at(int p, int q, int r) const {
    const auto it = entries_.find({p, q, r});
    if (it == entries_.end()) {
        fail(ErrorKind::incomplete_input,
             "d_" + std::to_string(p) + std::to_string(q) + std::to_string(r) + " is missing from the moment table");
    }
    return it->second;
}

double PartialMomentTable::starred(int p, int q, int r) const {
    const std::array<int, 3> k{p, q, r};
    static const std::array<std::array<int, 3>, 6> allowed{
        {{4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {2, 2, 0}, {2, 0, 2}, {0, 2, 2}}};
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) {
        fail(ErrorKind::validation,
             "no starred form for d_" + std::to_string(p) + std::to_string(q) + std::to_string(r));
    }
    return at(p, q, r) - 1.0;
}

double partial_pqr(const FinitePopulation& pop, int p, int q, int r) {
    const auto& y = pop.y();
    const auto& x = pop.x();
    const auto& z = pop.z();
    const double my = mean_of(y), mx = mean_of(x), mz = mean_of(z);
    const auto n = static_cast<double>(y.size());
    double s = 0, s200 = 0, s020 = 0, s002 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dy = y[i] - my, dx = x[i] - mx, dz = z[i] - mz;
        s += std::pow(dy, p) * std::pow(dx, q) * std::pow(dz, r);
        s200 += dy * dy;
        s020 += dx * dx;
        s002 += dz * dz;
    }
    if (s200 <= 0 || s020 <= 0 || s002 <= 0) fail(ErrorKind::degenerate_moment, "zero second moment in d_pqr");
    return (s / n) / (std::pow(s200 / n, p / 2.0) * std::pow(s020 / n, q / 2.0) * std::pow(s002 / n, r / 2.0));
}

double Stratum::gamma() const {
    return (1.0 - static_cast<double>(n) / static_cast<double>(N)) / static_cast<double>(n);
}

double Stratum::k1() const {
    const double Nh = static_cast<double>(N), nh = static_cast<double>(n);
    return (Nh - nh) * (Nh - 2 * nh) / ((Nh - 1) * (Nh - 2) * nh * nh);
}

double Stratum::k2() const {
    const double Nh = static_cast<double>(N), nh = static_cast<double>(n);
    return (Nh - nh) * (Nh * Nh + Nh - 6 * nh * Nh + 6 * nh * nh) / ((Nh - 1) * (Nh - 2) * (Nh - 3) * nh * nh * nh);
}

double Stratum::k3() const {
    const double Nh = static_cast<double>(N), nh = static_cast<double>(n);
    return Nh * (Nh - nh) * (Nh - nh - 1) * (nh - 1) / ((Nh - 1) * (Nh - 2) * (Nh - 3) * nh * nh * nh);
}

double Stratum::mu(int p, int q) const {
    const auto it = central.find({p, q});
    if (it == central.end()) {
        fail(ErrorKind::incomplete_input,
             "stratum '" + label + "' lacks the central moment mu_" + std::to_string(p) + std::to_string(q));
    }
    return it->second;
}

StratifiedPopulation::StratifiedPopulation(std::vector<Stratum> strata) : strata_(std::move(strata)) {
    if (strata_.empty()) fail(ErrorKind::validation, "stratified population needs at least one stratum");
    for (const auto& s : strata_) {
        if (s.n < 1 || s.n >= s.N) {
            fail(ErrorKind::design, "stratum '" + s.label + "' needs 1 <= n_h < N_h, got (N_h=" + std::to_string(s.N) +
                                        ", n_h=" + std::to_string(s.n) + ")");
        }
        N_ += s.N;
    }
    double wsum = 0;
    for (auto& s : strata_) {
        s.W = static_cast<double>(s.N) / static_cast<double>(N_);
        wsum += s.W;
        meanY_ += s.W * s.meanY;
        meanX_ += s.W * s.meanX;
    }
    if (std::abs(wsum - 1.0) > 1e-12) fail(ErrorKind::validation, "stratum weights do not sum to 1");
}

StratifiedPopulation StratifiedPopulation::from_population(const FinitePopulation& pop,
                                                           const std::map<std::string, std::size_t>& allocation) {
    const auto& labels = pop.stratum();
    const auto& x = pop.x();
    const auto& y = pop.y();
    std::map<std::string, std::vector<std::size_t>> members;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = members.try_emplace(labels[i]);
        if (inserted) order.push_back(labels[i]);
        it->second.push_back(i);
    }
    std::vector<Stratum> strata;
    for (const auto& label : order) {
        const auto alloc = allocation.find(label);
        if (alloc == allocation.end()) fail(ErrorKind::incomplete_input, "no allocation given for stratum '" + label + "'");
        const auto& idx = members[label];
        std::vector<double> xs, ys;
        for (auto i : idx) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
        Stratum s;
        s.label = label;
        s.N = idx.size();
        s.n = alloc->second;
        s.meanX = mean_of(xs);
        s.meanY = mean_of(ys);
        for (int p = 0; p <= 4; ++p) {
            for (int q = 0; p + q <= 4; ++q) s.central[{p, q}] = central(xs, s.meanX, p, ys, s.meanY, q);
        }
        strata.push_back(std::move(s));
    }
    return StratifiedPopulation(std::move(strata));
}

namespace {

// E over one stratum's SRSWOR of the product of sample-mean deviations, one
// factor per slot; slot value 0 = y, 1 = x.
double stratum_expectation(const Stratum& s, const std::vector<int>& slots) {
    const auto mu_of = [&](std::initializer_list<int> vars) {
        int p = 0, q = 0;
        for (int v : vars) (v == 1 ? p : q) += 1;
        return s.mu(p, q);
    };
    const double Nh = static_cast<double>(s.N), nh = static_cast<double>(s.n);
    switch (slots.size()) {
        case 0: return 1.0;
        case 1: return 0.0;
        case 2: return (Nh - nh) / ((Nh - 1) * nh) * mu_of({slots[0], slots[1]});
        case 3: return s.k1() * mu_of({slots[0], slots[1], slots[2]});
        case 4: {
            const double pairings = mu_of({slots[0], slots[1]}) * mu_of({slots[2], slots[3]}) +
                                    mu_of({slots[0], slots[2]}) * mu_of({slots[1], slots[3]}) +
                                    mu_of({slots[0], slots[3]}) * mu_of({slots[1], slots[2]});
            return s.k2() * mu_of({slots[0], slots[1], slots[2], slots[3]}) + s.k3() * pairings;
        }
        default: fail(ErrorKind::validation, "stratified moments support order <= 4");
    }
}

}  // namespace

double stratified_vrs(const StratifiedPopulation& strat, int r, int s, VrsMode mode) {
    if (r < 0 || s < 0 || r + s > 4) fail(ErrorKind::validation, "V_rs needs r + s <= 4");
    std::vector<int> slots;
    slots.insert(slots.end(), static_cast<std::size_t>(r), 0);
    slots.insert(slots.end(), static_cast<std::size_t>(s), 1);
    const auto& strata = strat.strata();
    const std::size_t L = strata.size();
    const std::size_t k = slots.size();
    const double scale = std::pow(strat.meanY(), r) * std::pow(strat.meanX(), s);
    if (scale == 0) fail(ErrorKind::degenerate_moment, "V_rs divides by a zero population mean");
    if (k == 0) return 1.0;

    // Sum over assignments of slots to strata; strata are independent.
    std::vector<std::size_t> assign(k, 0);
    double total = 0;
    while (true) {
        bool single = true;
        for (std::size_t i = 1; i < k; ++i) single = single && assign[i] == assign[0];
        if (mode == VrsMode::exact || single) {
            double term = 1.0;
            for (std::size_t h = 0; h < L && term != 0.0; ++h) {
                std::vector<int> mine;
                for (std::size_t i = 0; i < k; ++i) {
                    if (assign[i] == h) mine.push_back(slots[i]);
                }
                if (mine.empty()) continue;
                term *= std::pow(strata[h].W, static_cast<double>(mine.size())) * stratum_expectation(strata[h], mine);
            }
            total += term;
        }
        std::size_t i = 0;
        while (i < k && ++assign[i] == L) assign[i++] = 0;
        if (i == k) break;
    }
    return total / scale;
}

}  // namespace estlab
