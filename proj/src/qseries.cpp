#include "heckmort/qseries.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace heckmort {

Coeff coeff_pow(const Coeff& c, std::int64_t e) {
    if (e == 0) return Coeff(1);
    if (c == 0) {
        if (e < 0) throw std::domain_error("coeff_pow: zero base with negative exponent");
        return Coeff(0);
    }
    mpz_class n, d;
    auto ue = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(n.get_mpz_t(), c.get_num().get_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), c.get_den().get_mpz_t(), ue);
    Coeff out;
    if (e > 0) {
        out = Coeff(n) / Coeff(d);
    } else {
        out = Coeff(d) / Coeff(n);
    }
    return out;
}

namespace {

bool exact_root(const mpz_class& x, unsigned long r, mpz_class& out) {
    if (x == 0) {
        out = 0;
        return true;
    }
    return mpz_root(out.get_mpz_t(), x.get_mpz_t(), r) != 0;
}

}  // namespace

SignedMonomial SignedMonomial::pow(const Rat64& k) const {
    Exponent e = exp * k;
    if (k.is_integer()) return SignedMonomial(coeff_pow(coeff, k.num()), e);
    if (coeff < 0)
        throw EngineError(ErrorKind::HalfPowerOfNegative,
                          "fractional power " + k.str() + " of " + str());
    mpz_class rn, rd;
    auto root_index = static_cast<unsigned long>(k.den());
    if (!exact_root(coeff.get_num(), root_index, rn) || !exact_root(coeff.get_den(), root_index, rd))
        throw EngineError(ErrorKind::NonrepresentablePower,
                          "power " + k.str() + " of " + str() + " is not rational");
    Coeff root = Coeff(rn) / Coeff(rd);
    return SignedMonomial(coeff_pow(root, k.num()), e);
}

std::optional<std::int64_t> SignedMonomial::integral_power_of(const SignedMonomial& base) const {
    if (!(base.exp > Exponent(0)))
        throw std::domain_error("integral_power_of: base must have positive q-order");
    Rat64 k = exp / base.exp;
    if (!k.is_integer()) return std::nullopt;
    if (coeff != coeff_pow(base.coeff, k.num())) return std::nullopt;
    return k.num();
}

std::string SignedMonomial::str() const {
    std::string s;
    Coeff c = coeff;
    if (c < 0) {
        s += "-";
        c = -c;
    }
    if (c != 1) s += "c" + c.get_str() + "*";
    s += "q^" + exp.str();
    return s;
}

const char* verify_status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Verified: return "Verified";
        case VerifyStatus::Mismatch: return "Mismatch";
        case VerifyStatus::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

QSeries::QSeries(TermMap terms, Exponent precision) : terms_(std::move(terms)), prec_(precision) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0 || !(it->first < prec_))
            it = terms_.erase(it);
        else
            ++it;
    }
}

QSeries QSeries::constant(const Coeff& c, Exponent precision) {
    QSeries s(precision);
    s.add_term(Exponent(0), c);
    return s;
}

QSeries QSeries::monomial(const SignedMonomial& m, Exponent precision) {
    QSeries s(precision);
    s.add_term(m.exp, m.coeff);
    return s;
}

QSeries QSeries::one_minus(const SignedMonomial& m, Exponent precision) {
    QSeries s(precision);
    s.add_term(Exponent(0), Coeff(1));
    s.add_term(m.exp, -m.coeff);
    return s;
}

std::optional<Exponent> QSeries::q_order() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

Coeff QSeries::coeff_at(const Exponent& e) const {
    if (!(e < prec_))
        throw EngineError(ErrorKind::InsufficientPrecision,
                          "coefficient at q^" + e.str() + " is beyond the horizon q^" + prec_.str());
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
}

void QSeries::add_term(const Exponent& e, const Coeff& c) {
    if (c == 0 || !(e < prec_)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

QSeries QSeries::truncated(Exponent new_precision) const {
    if (prec_ < new_precision)
        throw EngineError(ErrorKind::InsufficientPrecision,
                          "truncated: cannot raise horizon from q^" + prec_.str() + " to q^" +
                              new_precision.str());
    return QSeries(TermMap(terms_), new_precision);
}

QSeries operator+(const QSeries& a, const QSeries& b) {
    Exponent p = std::min(a.prec_, b.prec_);
    QSeries out(p);
    out.terms_ = QSeries::TermMap(a.terms_.begin(), a.terms_.lower_bound(p));
    for (const auto& [e, c] : b.terms_) {
        if (!(e < p)) break;
        out.add_term(e, c);
    }
    return out;
}

QSeries operator-(const QSeries& a) {
    QSeries out(a.prec_);
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
    return out;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries QSeries::scaled(const Coeff& c) const {
    QSeries out(prec_);
    if (c == 0) return out;
    for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
    return out;
}

QSeries QSeries::mul_monomial(const SignedMonomial& m) const {
    QSeries out(prec_ + m.exp);
    for (const auto& [e, v] : terms_) out.terms_.emplace(e + m.exp, v * m.coeff);
    return out;
}

QSeries QSeries::substitute_q_power(std::int64_t d) const {
    if (d < 1) throw std::domain_error("substitute_q_power: d must be a positive integer");
    QSeries out(prec_ * Exponent(d));
    for (const auto& [e, v] : terms_) out.terms_.emplace(e * Exponent(d), v);
    return out;
}

std::string QSeries::str() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) os << c.get_str() << "*q^(" << e.str() << ") + ";
    os << "O(q^(" << prec_.str() << "))";
    return os.str();
}

namespace {

// Product horizon: the unknown tail of one factor times the known leading
// term of the other bounds what the result can certify.
Exponent product_precision(const QSeries& a, const QSeries& b) {
    Exponent orda = a.q_order().value_or(a.precision());
    Exponent ordb = b.q_order().value_or(b.precision());
    return std::min(a.precision() + ordb, b.precision() + orda);
}

QSeries claim(const QSeries& s, Exponent p) { return QSeries(QSeries::TermMap(s.terms()), p); }

}  // namespace

QSeries mul_serial(const QSeries& a, const QSeries& b) {
    Exponent pout = product_precision(a, b);
    QSeries::TermMap out;
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            Exponent e = ea + eb;
            if (!(e < pout)) break;  // b's exponents ascend
            auto [it, inserted] = out.try_emplace(e, Coeff(0));
            it->second += ca * cb;
        }
    }
    return QSeries(std::move(out), pout);
}

QSeries mul_parallel(const QSeries& a, const QSeries& b) {
#ifndef _OPENMP
    return mul_serial(a, b);
#else
    Exponent pout = product_precision(a, b);
    std::vector<std::pair<Exponent, Coeff>> av(a.terms().begin(), a.terms().end());
    int nthreads = omp_get_max_threads();
    std::vector<QSeries::TermMap> parts(static_cast<std::size_t>(nthreads));

#pragma omp parallel num_threads(nthreads)
    {
        QSeries::TermMap& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(av.size()); ++i) {
            const Exponent& ea = av[static_cast<std::size_t>(i)].first;
            const Coeff& ca = av[static_cast<std::size_t>(i)].second;
            for (const auto& [eb, cb] : b.terms()) {
                Exponent e = ea + eb;
                if (!(e < pout)) break;
                auto [it, inserted] = local.try_emplace(e, Coeff(0));
                it->second += ca * cb;
            }
        }
    }

    QSeries::TermMap merged = std::move(parts[0]);
    for (std::size_t t = 1; t < parts.size(); ++t) {
        for (auto& [e, c] : parts[t]) {
            auto [it, inserted] = merged.try_emplace(e, c);
            if (!inserted) it->second += c;
        }
    }
    return QSeries(std::move(merged), pout);
#endif
}

QSeries mul(const QSeries& a, const QSeries& b) {
    if (a.term_count() * b.term_count() >= 4096) return mul_parallel(a, b);
    return mul_serial(a, b);
}

QSeries invert(const QSeries& a) {
    auto lead = a.q_order();
    if (!lead)
        throw EngineError(ErrorKind::InsufficientPrecision,
                          "invert: no nonzero coefficient below the horizon q^" +
                              a.precision().str());
    SignedMonomial m0(a.coeff_at(*lead), *lead);
    SignedMonomial m0inv = m0.inverse();
    QSeries v = a.mul_monomial(m0inv);  // 1 + u with q_order(u) > 0
    Exponent rel = v.precision();
    QSeries u = v - QSeries::constant(1, rel);

    QSeries recip = QSeries::constant(1, rel);
    if (auto t0 = u.q_order()) {
        // Newton iteration r <- r(2 - vr): correct digits double each step,
        // so claimed horizons are set from the iteration count, not from the
        // (weaker) generic product propagation.
        Exponent t = *t0;
        QSeries r = QSeries::constant(1, t);
        while (true) {
            Exponent t2 = std::min(t + t, rel);
            QSeries w = mul(v.truncated(t2), claim(r, t2));
            QSeries z = QSeries::constant(2, t2) - w;
            r = claim(mul(z, claim(r, t2)), t2);
            t = t2;
            if (!(t < rel)) break;
        }
        recip = r;
    }
    return recip.mul_monomial(m0inv);
}

QSeries pow_int(const QSeries& a, std::int64_t n) {
    if (n < 0) return pow_int(invert(a), -n);
    if (n == 0) return QSeries::constant(1, a.precision());
    QSeries out = a;
    for (std::int64_t i = 1; i < n; ++i) out = mul(out, a);
    return out;
}

QSeries expand_reciprocal_one_minus(const SignedMonomial& m, Exponent precision) {
    QSeries out(precision);
    if (m.exp > Exponent(0)) {
        Coeff c(1);
        Exponent e(0);
        while (e < precision) {
            out.add_term(e, c);
            c *= m.coeff;
            e += m.exp;
        }
        return out;
    }
    if (m.exp < Exponent(0)) {
        // 1/(1-m) = -m^{-1} / (1 - m^{-1}) = -sum_{k>=1} m^{-k}
        SignedMonomial mi = m.inverse();
        Coeff c = -mi.coeff;
        Exponent e = mi.exp;
        while (e < precision) {
            out.add_term(e, c);
            c *= mi.coeff;
            e += mi.exp;
        }
        return out;
    }
    if (m.coeff == 1)
        throw EngineError(ErrorKind::PoleAtSpecialization,
                          "reciprocal of 1 - " + m.str() + " which is zero");
    out.add_term(Exponent(0), Coeff(1) / (Coeff(1) - m.coeff));
    return out;
}

VerificationReport compare(const QSeries& a, const QSeries& b) {
    VerificationReport rep;
    Exponent minp = std::min(a.precision(), b.precision());
    rep.checked_to = minp;

    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    const auto enda = a.terms().end();
    const auto endb = b.terms().end();
    while (true) {
        bool ha = ia != enda && ia->first < minp;
        bool hb = ib != endb && ib->first < minp;
        if (!ha && !hb) break;
        if (ha && (!hb || ia->first < ib->first)) {
            rep.status = VerifyStatus::Mismatch;
            rep.first_mismatch = MismatchInfo{ia->first, ia->second, Coeff(0)};
            return rep;
        }
        if (hb && (!ha || ib->first < ia->first)) {
            rep.status = VerifyStatus::Mismatch;
            rep.first_mismatch = MismatchInfo{ib->first, Coeff(0), ib->second};
            return rep;
        }
        if (ia->second != ib->second) {
            rep.status = VerifyStatus::Mismatch;
            rep.first_mismatch = MismatchInfo{ia->first, ia->second, ib->second};
            return rep;
        }
        ++ia;
        ++ib;
    }
    rep.status = VerifyStatus::Verified;
    return rep;
}

VerificationReport compare_at(const QSeries& a, const QSeries& b, const Exponent& requested_order) {
    VerificationReport rep = compare(a, b);
    if (rep.status == VerifyStatus::Verified && rep.checked_to < requested_order)
        rep.status = VerifyStatus::Inconclusive;
    return rep;
}

}  // namespace heckmort
