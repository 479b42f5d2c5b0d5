#include "heckmort/replay.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "heckmort/errors.hpp"
#include "heckmort/hecke.hpp"
#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

std::int64_t binom2i(std::int64_t k) { return Rat64::checked_mul(k, k - 1) / 2; }

// Euclidean decomposition a = n*q + r with 0 <= r < n.
std::pair<std::int64_t, std::int64_t> floor_divmod(std::int64_t a, std::int64_t n) {
    std::int64_t q = a / n;
    std::int64_t r = a - q * n;
    if (r < 0) {
        --q;
        r += n;
    }
    return {q, r};
}

Coeff half_units(int weight2) {
    if (weight2 % 2 == 0) return Coeff(weight2 / 2);
    Coeff c(weight2, 2);
    c.canonicalize();
    return c;
}

// Memoized integer powers of one exact rational base. The unit bases that
// dominate replay workloads short-circuit to a parity check.
class PowerCache {
public:
    explicit PowerCache(const Coeff& base)
        : base_(base), unit_(base == 1 || base == -1), positive_(base == 1) {}

    Coeff get(std::int64_t e) {
        if (unit_) return (positive_ || e % 2 == 0) ? Coeff(1) : Coeff(-1);
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        Coeff value = coeff_pow(base_, e);
        memo_.emplace(e, value);
        return value;
    }

private:
    Coeff base_;
    bool unit_;
    bool positive_;
    std::unordered_map<std::int64_t, Coeff> memo_;
};

struct ScaledSpec {
    std::int64_t sx;       // x exponent times scale
    std::int64_t sy;       // y exponent times scale
    std::int64_t max_exp;  // largest scaled exponent below the horizon
};

ScaledSpec scale_spec(const LatticeSum& sum) {
    if (sum.dims < 1 || sum.dims > 4) throw std::invalid_argument("lattice_box_sum: dims must be 1..4");
    if (sum.scale < 1) throw std::invalid_argument("lattice_box_sum: scale must be positive");
    Exponent sx = sum.x.exp * Exponent(sum.scale);
    Exponent sy = sum.y.exp * Exponent(sum.scale);
    if (!sx.is_integer() || !sy.is_integer())
        throw std::invalid_argument("lattice_box_sum: scale does not clear the spec exponents");
    Exponent bound = sum.precision * Exponent(sum.scale);
    return {sx.num(), sy.num(), bound.ceil() - 1};
}

template <class PointFn>
void walk_box(int dims, std::int64_t radius, std::int64_t lead_lo, std::int64_t lead_hi,
              PointFn&& fn) {
    std::array<std::int64_t, 4> b{};
    for (b[0] = lead_lo; b[0] <= lead_hi; ++b[0]) {
        if (dims == 1) {
            fn(b.data());
            continue;
        }
        for (b[1] = -radius; b[1] <= radius; ++b[1]) {
            if (dims == 2) {
                fn(b.data());
                continue;
            }
            for (b[2] = -radius; b[2] <= radius; ++b[2]) {
                if (dims == 3) {
                    fn(b.data());
                    continue;
                }
                for (b[3] = -radius; b[3] <= radius; ++b[3]) fn(b.data());
            }
        }
    }
}

void accumulate_range(const LatticeSum& sum, const ScaledSpec& sc, std::int64_t radius,
                      std::int64_t lead_lo, std::int64_t lead_hi, QSeries& acc, PowerCache& px,
                      PowerCache& py) {
    std::vector<LatticeTerm> terms;
    walk_box(sum.dims, radius, lead_lo, lead_hi, [&](const std::int64_t* b) {
        terms.clear();
        sum.terms(b, terms);
        for (const LatticeTerm& t : terms) {
            if (t.weight2 == 0) continue;
            std::int64_t e = t.exp_scaled + t.xpow * sc.sx + t.ypow * sc.sy;
            if (e > sc.max_exp) continue;
            acc.add_term(Exponent(e, sum.scale), half_units(t.weight2) * px.get(t.xpow) * py.get(t.ypow));
        }
    });
}

}  // namespace

QSeries lattice_box_sum_serial(const LatticeSum& sum, std::int64_t radius) {
    ScaledSpec sc = scale_spec(sum);
    QSeries acc(sum.precision);
    PowerCache px(-sum.x.coeff);
    PowerCache py(-sum.y.coeff);
    accumulate_range(sum, sc, radius, -radius, radius, acc, px, py);
    return acc;
}

QSeries lattice_box_sum_parallel(const LatticeSum& sum, std::int64_t radius) {
#ifndef _OPENMP
    return lattice_box_sum_serial(sum, radius);
#else
    ScaledSpec sc = scale_spec(sum);
    const std::int64_t width = 2 * radius + 1;
    const int nthreads =
        static_cast<int>(std::min<std::int64_t>(omp_get_max_threads(), width));
    std::vector<QSeries> parts(static_cast<std::size_t>(nthreads), QSeries(sum.precision));
#pragma omp parallel num_threads(nthreads)
    {
        QSeries& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
        PowerCache px(-sum.x.coeff);
        PowerCache py(-sum.y.coeff);
#pragma omp for schedule(static)
        for (std::int64_t lead = -radius; lead <= radius; ++lead)
            accumulate_range(sum, sc, radius, lead, lead, local, px, py);
    }
    QSeries acc(sum.precision);
    for (const QSeries& part : parts) acc = acc + part;
    return acc;
#endif
}

QSeries lattice_box_sum(const LatticeSum& sum, std::int64_t initial_radius,
                        std::int64_t max_radius) {
    std::int64_t radius = std::max<std::int64_t>(1, initial_radius);
    auto run = [&](std::int64_t r) {
        // The parallel split only pays off once the box is substantial.
        const bool wide = r >= 16 && sum.dims >= 3;
        return wide ? lattice_box_sum_parallel(sum, r) : lattice_box_sum_serial(sum, r);
    };
    QSeries prev = run(radius);
    while (radius < max_radius) {
        radius *= 2;
        QSeries next = run(radius);
        if (prev.terms() == next.terms()) return next;
        prev = std::move(next);
    }
    throw EngineError(ErrorKind::NonterminatingEnumeration,
                      "lattice_box_sum: no stabilization below the horizon within the radius cap");
}

namespace {

// Shared integer data for the rewrite-stage callbacks. For odd n the two
// fractional shifts (n-1)/2 and (n+1)/2 are the integers h and h+1.
struct StageData {
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t h = 0;        // (n - 1) / 2
    std::int64_t b = 0;        // n + p
    std::int64_t disc = 0;     // p(2n+p)
    std::int64_t big = 0;      // p^2(2n+p)
    std::int64_t bar_mod = 0;  // np(2n+p)
    std::int64_t lead = 0;     // n(np + C(p+1,2))
    std::int64_t scale = 0;    // clears the spec exponents and the half units
    std::int64_t half = 0;     // scale / 2
};

StageData make_stage_data(const MasterParams& mp, const Specialization& spec) {
    StageData d;
    d.n = mp.n;
    d.p = mp.p;
    d.h = (mp.n - 1) / 2;
    d.b = mp.n + mp.p;
    d.disc = mp.p * (2 * mp.n + mp.p);
    d.big = mp.p * d.disc;
    d.bar_mod = mp.n * d.disc;
    d.lead = mp.n * (mp.n * mp.p + mp.p * (mp.p + 1) / 2);
    d.scale = std::lcm<std::int64_t>(2, std::lcm(spec.x.exp.den(), spec.y.exp.den()));
    d.half = d.scale / 2;
    return d;
}

using StageFn = std::function<void(const std::int64_t*, std::vector<LatticeTerm>&)>;

LatticeSum stage_sum(const StageData& d, const Specialization& spec, Exponent precision,
                     StageFn fn) {
    LatticeSum sum;
    sum.dims = 3;
    sum.scale = d.scale;
    sum.x = spec.x;
    sum.y = spec.y;
    sum.precision = precision;
    sum.terms = std::move(fn);
    return sum;
}

// Right side, first form: each grid summand's theta quotient replaced by
// its bilateral double-sum expansion (indices t, u) and the ratio theta by
// its defining sum (index v); the finite p x p grid is walked per point.
LatticeSum expanded_quotient_sum(const StageData& d, const Specialization& spec,
                                 Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t t = idx[0], u = idx[1], v = idx[2];
        const int w2 = 2 * sg2(t, u);
        if (w2 == 0) return;
        for (std::int64_t r = 0; r < d.p; ++r) {
            for (std::int64_t s = 0; s < d.p; ++s) {
                const std::int64_t alpha = r - d.h;
                const std::int64_t beta = s + d.h + 1;
                const std::int64_t xpow = r + d.b * u - d.n * t + d.n * v - d.h;
                const std::int64_t ypow = s + d.b * t - d.n * u - d.n * v + d.h + 1;
                const std::int64_t e =
                    d.scale * (d.n * binom2i(alpha) + d.b * alpha * beta + d.n * binom2i(beta) +
                               d.n * d.p * d.p * binom2i(v) + d.n * d.p * (s - r) * v +
                               d.big * t * u + d.disc * (r * t + s * u)) +
                    d.half * d.p * d.b * (t + u);
                out.push_back({e, xpow, ypow, w2});
            }
        }
    });
}

// Right side after r = R - pu, s = S - pt, v = t - u - w: the grid indices
// are absorbed and only the bilateral pair (R, S) and the ladder index w
// remain.
LatticeSum absorbed_grid_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t r = idx[0], s = idx[1], w = idx[2];
        const int w2 = 2 * sg2(r, s);
        if (w2 == 0) return;
        const std::int64_t xpow = r - d.n * w - d.h;
        const std::int64_t ypow = s + d.n * w + d.h + 1;
        const std::int64_t e = d.scale * (d.n * binom2i(xpow) + d.b * xpow * ypow +
                                          d.n * binom2i(ypow) + d.bar_mod * binom2i(w + 1));
        out.push_back({e, xpow, ypow, w2});
    });
}

// Right side with the monomial powers recentered at the lattice origin;
// the shift now lives inside the sign weight.
LatticeSum recentered_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t r = idx[0], s = idx[1], w = idx[2];
        const int w2 = 2 * sg2(r + d.n * w + d.h, s - d.n * w - d.h - 1);
        if (w2 == 0) return;
        const std::int64_t e = d.scale * (d.n * binom2i(r) + d.b * r * s + d.n * binom2i(s) +
                                          d.bar_mod * binom2i(w + 1));
        out.push_back({e, r, s, w2});
    });
}

// The combined sign weight written as the mean of its two one-sided
// halves. Each half alone spreads over every quadrant, so the halves are
// emitted on the shared lattice cell and cancel pointwise outside the
// cones during accumulation.
LatticeSum half_split_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t r = idx[0], s = idx[1], w = idx[2];
        const std::int64_t e = d.scale * (d.n * binom2i(r) + d.b * r * s + d.n * binom2i(s) +
                                          d.bar_mod * binom2i(w + 1));
        out.push_back({e, r, s, sg(r + d.n * w + d.h)});
        out.push_back({e, r, s, sg(s - d.n * w - d.h - 1)});
    });
}

// The one-sided halves with the x power (first half) resp. y power
// (second half) decomposed as n*quotient + residue. The decomposition is
// recovered pointwise by floor division so both halves stay on a common
// (xpow, ypow, w) lattice and keep cancelling cellwise.
LatticeSum residue_split_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t a = idx[0], c = idx[1], w = idx[2];
        const std::int64_t ladder = d.bar_mod * binom2i(w + 1);
        {
            const auto [r, k] = floor_divmod(a, d.n);
            const std::int64_t nrk = d.n * r + k;
            const std::int64_t e = d.scale * (d.n * binom2i(nrk) + d.b * nrk * c +
                                              d.n * binom2i(c) + ladder);
            out.push_back({e, nrk, c, sg(nrk + d.n * w + d.h)});
        }
        {
            const auto [s, k] = floor_divmod(c, d.n);
            const std::int64_t nsk = d.n * s + k;
            const std::int64_t e = d.scale * (d.n * binom2i(a) + d.b * a * nsk +
                                              d.n * binom2i(nsk) + ladder);
            out.push_back({e, a, nsk, sg(nsk - d.n * w - d.h - 1)});
        }
    });
}

// Left side, first term: the weighted double sum multiplied out against
// the ladder factor's defining sum.
LatticeSum weighted_double_sum(const StageData& d, const Specialization& spec,
                               Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t r = idx[0], s = idx[1], w = idx[2];
        const int w2 = 2 * sg2(r, s);
        if (w2 == 0) return;
        const std::int64_t e = d.scale * (d.n * binom2i(r) + d.b * r * s + d.n * binom2i(s) +
                                          d.bar_mod * binom2i(w + 1));
        out.push_back({e, r, s, w2});
    });
}

// Left side, second term: every Appell factor replaced by its one-sided
// expansion (low residues use the in-window branch, high residues the
// mirrored one) and the theta factor by its defining sum. The enclosing
// side carries a global minus sign, so each term enters negated.
LatticeSum appell_expansion_sum(const StageData& d, const Specialization& spec,
                                Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t v = idx[0], s = idx[1], t = idx[2];
        const int w2 = -2 * sg2(v, s);
        if (w2 == 0) return;
        for (std::int64_t k = 0; k < d.n; ++k) {
            const bool low = k <= d.h;
            const std::int64_t tail =
                low ? binom2i(v + 1) + v * s : binom2i(v + 1) + (v + 1) * (s + 1);
            const std::int64_t e =
                d.scale * (d.n * binom2i(k) + d.n * binom2i(t) + d.b * k * t + d.lead * s -
                           k * d.disc * s + d.bar_mod * tail);
            const std::int64_t res_pow = k + d.n * s;
            const std::int64_t theta_pow = t - d.b * s;
            out.push_back({e, res_pow, theta_pow, w2});
            out.push_back({e, theta_pow, res_pow, w2});
        }
    });
}

// The same sums after t = (n+p)s + r eliminates the theta index.
LatticeSum contracted_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t v = idx[0], s = idx[1], r = idx[2];
        const int w2 = -2 * sg2(v, s);
        if (w2 == 0) return;
        for (std::int64_t k = 0; k < d.n; ++k) {
            const bool low = k <= d.h;
            const std::int64_t nsk = d.n * s + k;
            const std::int64_t e =
                d.scale * (d.n * binom2i(r) + d.b * r * nsk + d.n * binom2i(nsk) +
                           d.bar_mod * binom2i(s + v + (low ? 1 : 2)));
            out.push_back({e, nsk, r, w2});
            out.push_back({e, r, nsk, w2});
        }
    });
}

// The same sums with the bound variables of the first two families
// swapped, aligning all four families on one index pattern.
LatticeSum relabeled_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t v = idx[0], i = idx[1], j = idx[2];
        const int w2 = -2 * sg2(v, i);
        if (w2 == 0) return;
        for (std::int64_t k = 0; k < d.n; ++k) {
            const bool low = k <= d.h;
            const std::int64_t nik = d.n * i + k;
            const std::int64_t e =
                d.scale * (d.n * binom2i(j) + d.b * j * nik + d.n * binom2i(nik) +
                           d.bar_mod * binom2i(i + v + (low ? 1 : 2)));
            out.push_back({e, nik, j, w2});
            out.push_back({e, j, nik, w2});
        }
    });
}

// The expansion index v traded for the ladder index w (v = -w-1-i resp.
// -w-2-i on the first side, w-i resp. w-1-i on the mirrored side), putting
// all four families on the ladder exponent used by the right side.
LatticeSum aligned_sum(const StageData& d, const Specialization& spec, Exponent precision) {
    return stage_sum(d, spec, precision, [d](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t w = idx[0], i = idx[1], j = idx[2];
        const std::int64_t ladder = d.bar_mod * binom2i(w + 1);
        for (std::int64_t k = 0; k < d.n; ++k) {
            const bool low = k <= d.h;
            const std::int64_t nik = d.n * i + k;
            const std::int64_t e = d.scale * (d.n * binom2i(j) + d.b * j * nik +
                                              d.n * binom2i(nik) + ladder);
            const int wx = -2 * sg2(low ? -w - 1 - i : -w - 2 - i, i);
            const int wy = -2 * sg2(low ? w - i : w - 1 - i, i);
            if (wx != 0) out.push_back({e, nik, j, wx});
            if (wy != 0) out.push_back({e, j, nik, wy});
        }
    });
}

// The multiplied-through right side: the ladder factor in the correction
// term's denominator cancels against the multiplier, leaving the grid
// summands times the cubed eta-style factor alone.
QSeries grid_times_eta_cube(const MasterParams& mp, const Specialization& spec,
                            Exponent precision) {
    const std::int64_t eta_base = mp.p * mp.p * (2 * mp.n + mp.p);
    const std::vector<ThetaQuotientTerm> grid = theta_np_terms(mp, spec);
    return with_precision_target(precision, [&](Exponent w) {
        QSeries common = pow_int(J(0, eta_base, JKind::Eta, w), 3);
        QSeries acc = QSeries::zero(w);
        for (const ThetaQuotientTerm& t : grid) {
            QSeries num = mul(theta_j(t.num_ratio, w), theta_j(t.num_product, w));
            QSeries den = mul(theta_j(t.den_y_over_x, w), theta_j(t.den_x_over_y, w));
            acc = acc + mul(mul(num, invert(den)), common).mul_monomial(t.prefactor);
        }
        return acc;
    });
}

QSeries bar_times_hecke(const MasterParams& mp, const Specialization& spec, Exponent precision) {
    const HeckeParams hp{mp.n, mp.n + mp.p, mp.n};
    const std::int64_t bar_mod = mp.n * mp.p * (2 * mp.n + mp.p);
    return with_precision_target(precision, [&](Exponent w) {
        return mul(J(0, bar_mod, JKind::Bar, w), f_abc(hp, spec.x, spec.y, w));
    });
}

QSeries neg_bar_times_assembly(const MasterParams& mp, const Specialization& spec,
                               Exponent precision) {
    const HeckeParams hp{mp.n, mp.n + mp.p, mp.n};
    const std::int64_t bar_mod = mp.n * mp.p * (2 * mp.n + mp.p);
    return with_precision_target(precision, [&](Exponent w) {
        return mul(J(0, bar_mod, JKind::Bar, w), g_abc(hp, spec.x, spec.y, w)).scaled(Coeff(-1));
    });
}

template <class Fn>
std::pair<QSeries, double> timed(Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    QSeries value = fn();
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return {std::move(value), ms};
}

}  // namespace

std::vector<ReplayStage> replay_proof(const MasterParams& mp, const Specialization& spec,
                                      Exponent precision) {
    mp.discriminant();
    if (mp.n % 2 == 0)
        throw std::domain_error("replay_proof: the replayed derivation covers odd n only");
    if (!check_windows(mp, spec).all())
        throw EngineError(ErrorKind::WindowViolation,
                          "replay_proof: specialization outside the convergence windows");

    const StageData d = make_stage_data(mp, spec);
    std::vector<ReplayStage> stages;
    auto push = [&](const char* label, const QSeries& lhs, const QSeries& rhs, double ms) {
        VerificationReport report = compare_at(lhs, rhs, precision);
        report.elapsed_ms += ms;
        stages.push_back(ReplayStage{label, report});
    };
    auto boxed = [&](LatticeSum (*builder)(const StageData&, const Specialization&, Exponent)) {
        return timed([&] { return lattice_box_sum(builder(d, spec, precision)); });
    };

    auto [quotient_side, ms_q] = timed([&] { return grid_times_eta_cube(mp, spec, precision); });
    auto [expanded, ms_r1] = boxed(expanded_quotient_sum);
    push("theta quotient expanded into bilateral sums", quotient_side, expanded, ms_q + ms_r1);

    auto [absorbed, ms_r2] = boxed(absorbed_grid_sum);
    push("finite grid absorbed into the lattice", expanded, absorbed, ms_r2);

    auto [recentered, ms_r3] = boxed(recentered_sum);
    push("summation recentered on the monomial powers", absorbed, recentered, ms_r3);

    auto [half_split, ms_r4] = boxed(half_split_sum);
    push("sign weight split into one-sided halves", recentered, half_split, ms_r4);

    auto [residue_split, ms_r5] = boxed(residue_split_sum);
    push("powers decomposed by residue class", half_split, residue_split, ms_r5);

    auto [double_sum, ms_l1] = boxed(weighted_double_sum);
    auto [product_side, ms_lp] = timed([&] { return bar_times_hecke(mp, spec, precision); });
    push("double sum matches the engine product", double_sum, product_side, ms_l1 + ms_lp);

    auto [assembly_side, ms_la] = timed([&] { return neg_bar_times_assembly(mp, spec, precision); });
    auto [appell_expanded, ms_l2] = boxed(appell_expansion_sum);
    push("Appell terms expanded below the horizon", assembly_side, appell_expanded, ms_la + ms_l2);

    auto [contracted, ms_l3] = boxed(contracted_sum);
    push("inner theta index eliminated", appell_expanded, contracted, ms_l3);

    auto [relabeled, ms_l4] = boxed(relabeled_sum);
    push("bound variables relabeled", contracted, relabeled, ms_l4);

    auto [aligned, ms_l5] = boxed(aligned_sum);
    push("lattice shift aligned with the sign identities", relabeled, aligned, ms_l5);

    auto [total, ms_t] = timed([&] { return double_sum + aligned; });
    push("assembled sides agree", total, residue_split, ms_t);

    return stages;
}

}  // namespace heckmort
