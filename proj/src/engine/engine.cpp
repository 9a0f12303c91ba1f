#include "engine/engine.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "eft/eft.h"

namespace resdbg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Residue poisoned() {
    return Residue{kNaN, kNoneOp, kNoneOp, false, false};
}

// Signed decomposition e_z = intro + amp1 + amp2.
struct Terms {
    double intro = 0.0;
    double amp1 = 0.0;
    double amp2 = 0.0;
};

enum class MaxFrom { IntroTerm, XTerm, YTerm };

Residue residue_for_override(OpId cur, double value) {
    // Overridden residues are treated as locally introduced: single-term
    // decomposition, so the probe op itself becomes the contributor.
    Residue r;
    r.value = value;
    if (std::isnan(value)) return poisoned();
    if (value == 0.0) {
        r.maxErrOp = kNoneOp;
        r.isZero = true;
    } else {
        r.maxErrOp = cur;
    }
    return r;
}

// An add/sub qualifies as a rounding-trick endpoint when exactly one operand
// is a literal +-C for a trick constant C.  eff is the effective added
// constant (literal negated for subtraction); other* identify the value being
// rounded.
struct TrickSides {
    double eff = 0.0;
    ValueRef otherRef;
    double otherActual = 0.0;
    bool otherIsX = true;
};

std::optional<TrickSides> trick_sides(const OpEvent& ev) {
    if (ev.kind == OpKind::Add) {
        if (ev.yref.kind == ValueRef::Literal && eft::is_trick_const(std::fabs(ev.y)))
            return TrickSides{ev.y, ev.xref, ev.x, true};
        if (ev.xref.kind == ValueRef::Literal && eft::is_trick_const(std::fabs(ev.x)))
            return TrickSides{ev.x, ev.yref, ev.y, false};
    } else if (ev.kind == OpKind::Sub) {
        // Only (t - C) counts; (C - t) negates t and breaks the pattern.
        if (ev.yref.kind == ValueRef::Literal && eft::is_trick_const(std::fabs(ev.y)))
            return TrickSides{-ev.y, ev.xref, ev.x, true};
    }
    return std::nullopt;
}

}  // namespace

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::Add: return "add";
        case OpKind::Sub: return "sub";
        case OpKind::Mul: return "mul";
        case OpKind::Div: return "div";
        case OpKind::Sqrt: return "sqrt";
        case OpKind::Fabs: return "fabs";
        case OpKind::Neg: return "neg";
        case OpKind::Cast64to32: return "cast64to32";
        case OpKind::Cast32to64: return "cast32to64";
    }
    return "?";
}

std::optional<double> trick_effective_const(const OpEvent& ev) {
    if (auto s = trick_sides(ev)) return s->eff;
    return std::nullopt;
}

ResidueEngine::ResidueEngine(const EngineConfig& cfg, RoSets ro) : cfg_(cfg), ro_(ro) {}

Residue ResidueEngine::residue_of(ValueRef ref) const {
    if (ref.kind == ValueRef::Op) return residues_.at(static_cast<size_t>(ref.id));
    return Residue{};
}

void ResidueEngine::note_trick_candidate(const OpEvent& ev, const Residue& ex,
                                         const Residue& ey) {
    TrickMeta m;
    if (auto s = trick_sides(ev)) {
        m.candidate = true;
        m.effConst = s->eff;
        m.otherRef = s->otherRef;
        m.otherActual = s->otherActual;
        m.otherResidue = s->otherIsX ? ex : ey;
    }
    assert(static_cast<OpId>(meta_.size()) == ev.id);
    meta_.push_back(m);
}

bool ResidueEngine::trick_fires(const OpEvent& ev, OpId& producer) {
    auto s = trick_sides(ev);
    if (!s || s->otherRef.kind != ValueRef::Op) return false;
    const TrickMeta& pm = meta_.at(static_cast<size_t>(s->otherRef.id));
    if (!pm.candidate || pm.effConst != -s->eff) return false;
    producer = s->otherRef.id;
    return true;
}

Residue ResidueEngine::compute(const OpEvent& ev, double mu, const Residue& ex,
                               const Residue& ey, bool trickFired) {
    (void)trickFired;
    if (!std::isfinite(ev.actual) || !std::isfinite(ev.x) ||
        (ev.binary && !std::isfinite(ev.y)) || std::isnan(ex.value) ||
        (ev.binary && std::isnan(ey.value)) || std::isnan(mu))
        return poisoned();

    const bool repo = cfg_.mode == EngineMode::Repo;
    const bool buggy = cfg_.mode == EngineMode::EftsanBuggy;

    Terms t;
    double value = 0.0;

    switch (ev.kind) {
        case OpKind::Add: {
            t = {mu, ex.value, ey.value};
            value = (mu + ex.value) + ey.value;
            break;
        }
        case OpKind::Sub: {
            if (buggy) {
                // Original sign bug: adds e_y instead of subtracting it.
                t = {mu, ex.value, ey.value};
                value = (mu + ex.value) + ey.value;
            } else {
                t = {mu, ex.value, -ey.value};
                value = (mu + ex.value) - ey.value;
            }
            break;
        }
        case OpKind::Mul: {
            // Full second-order coefficients; the baselines drop the e_x*e_y
            // cross term by using the bare operands.
            double B = repo ? ev.y + 0.5 * ey.value : ev.y;
            double C = repo ? ev.x + 0.5 * ex.value : ev.x;
            t = {mu, B * ex.value, C * ey.value};
            value = (mu + t.amp1) + t.amp2;
            break;
        }
        case OpKind::Div: {
            double den = ev.y + ey.value;
            if (den == 0.0) return poisoned();
            // (e_x - mu - zhat*e_y) / (yhat + e_y) with mu = q*y - x; the
            // buggy baseline flips the mu sign.
            double num = buggy ? ex.value + mu : ex.value - mu;
            value = std::fma(-ev.actual, ey.value, num) / den;
            t.intro = (buggy ? mu : -mu) / den;
            t.amp1 = ex.value / den;
            t.amp2 = (-ev.actual * ey.value) / den;
            break;
        }
        case OpKind::Sqrt: {
            // (e_x + mu) / D with mu = x - s^2.  D approximates
            // sqrt(x) + sqrt(x + e_x); the baselines use 2*s.
            double D;
            if (repo) {
                double shifted = ev.x + ex.value;
                if (shifted < 0.0) return poisoned();
                D = ev.actual + std::sqrt(shifted);
            } else {
                D = 2.0 * ev.actual;
            }
            double num = ex.value + mu;
            if (D == 0.0) {
                if (num != 0.0) return poisoned();
            } else {
                value = num / D;
                t.intro = mu / D;
                t.amp1 = ex.value / D;
            }
            break;
        }
        case OpKind::Fabs: {
            // Sign-aware: when |.| does not change the sign of the ideal
            // value, the residue just follows it; the naive difference form
            // can round the residue away entirely.
            double shifted = ev.x + ex.value;
            bool sameSign = std::signbit(ev.x) == std::signbit(shifted);
            if (repo && sameSign)
                value = std::copysign(1.0, ev.x) * ex.value;
            else
                value = std::fabs(shifted) - std::fabs(ev.x);
            t.amp1 = value;
            break;
        }
        case OpKind::Neg: {
            Residue r = ex;
            r.value = -ex.value;
            return r;
        }
        case OpKind::Cast64to32:
        case OpKind::Cast32to64: {
            t = {mu, ex.value, 0.0};
            value = mu + ex.value;
            break;
        }
    }

    if (std::isnan(value)) return poisoned();

    Residue r;
    r.value = value;

    double am = std::fabs(t.intro);
    double a1 = std::fabs(t.amp1);
    double a2 = std::fabs(t.amp2);
    OpId xop = ex.maxErrOp;
    OpId yop = ev.binary ? ey.maxErrOp : kNoneOp;

    MaxFrom from = MaxFrom::IntroTerm;
    if (mu == 0.0 && xop == kNoneOp && yop == kNoneOp) {
        // Exactly computed so far: dummy contributors.
        r.maxErrOp = kNoneOp;
        r.sndErrOp = kNoneOp;
    } else {
        // Contributor selection; ties resolve intro, then x, then y.
        if (am >= std::max(a1, a2)) {
            r.maxErrOp = ev.id;
            r.sndErrOp = (a1 > a2) ? xop : yop;
        } else if (a1 >= a2) {
            r.maxErrOp = xop;
            from = MaxFrom::XTerm;
            r.sndErrOp = (am > a2) ? ev.id : yop;
        } else {
            r.maxErrOp = yop;
            from = MaxFrom::YTerm;
            r.sndErrOp = (am > a1) ? ev.id : xop;
        }
        if (r.sndErrOp == r.maxErrOp) r.sndErrOp = kNoneOp;
    }

    // isZero: exact zero, or the residue computation itself was too
    // ill-conditioned for the value to be trusted.
    if (value == 0.0) {
        r.isZero = true;
    } else {
        double cond = (am + a1 + a2) / std::fabs(value);
        r.isZero = cond > cfg_.condThreshold;
    }

    // isAbsorbed: the largest term swallowed every other term up to slack...
    double largest = t.intro;
    int largestPos = 0;
    if (a1 > std::fabs(largest)) largest = t.amp1, largestPos = 1;
    if (a2 > std::fabs(largest)) largest = t.amp2, largestPos = 2;
    bool otherNonzero = (largestPos != 0 && t.intro != 0.0) ||
                        (largestPos != 1 && t.amp1 != 0.0) ||
                        (largestPos != 2 && t.amp2 != 0.0);
    if (otherNonzero &&
        std::fabs(value - largest) <= cfg_.absorbUlps * eft::ulp_at(value))
        r.isAbsorbed = true;

    // ...or inherited from the input that supplied the dominant contributor.
    if (cfg_.inheritAbsorbed && !r.isAbsorbed) {
        if (from == MaxFrom::XTerm && ex.isAbsorbed) r.isAbsorbed = true;
        if (from == MaxFrom::YTerm && ey.isAbsorbed) r.isAbsorbed = true;
    }

    return r;
}

Residue ResidueEngine::on_op(const OpEvent& ev) {
    assert(static_cast<OpId>(residues_.size()) == ev.id);
    Residue ex = residue_of(ev.xref);
    Residue ey = ev.binary ? residue_of(ev.yref) : Residue{};

    bool fired = false;
    if (cfg_.mode == EngineMode::Repo && cfg_.trickDetection &&
        (ev.kind == OpKind::Add || ev.kind == OpKind::Sub)) {
        OpId producer = kNoneOp;
        if (trick_fires(ev, producer)) {
            fired = true;
            // Rewrite the producer as if its mu were zero: its residue becomes
            // the residue of the value being rounded.
            Residue seed = meta_.at(static_cast<size_t>(producer)).otherResidue;
            residues_[static_cast<size_t>(producer)] = seed;
            amended_[producer] = seed;
            // The current op consumes the amended producer residue.
            if (ev.xref.kind == ValueRef::Op && ev.xref.id == producer) ex = seed;
            if (ev.binary && ev.yref.kind == ValueRef::Op && ev.yref.id == producer)
                ey = seed;
        }
    }

    Residue r;
    bool overridden = ro_.resOverride && ro_.resOverride->count(ev.id) > 0;
    if (overridden) {
        r = residue_for_override(ev.id, ro_.resOverride->at(ev.id));
    } else {
        double mu = 0.0;
        switch (ev.kind) {
            case OpKind::Add:
                mu = eft::two_sum(ev.x, ev.y).err;
                break;
            case OpKind::Sub:
                mu = eft::two_sum(ev.x, -ev.y).err;
                break;
            case OpKind::Mul: {
                eft::ProdErr p = eft::two_prod(ev.x, ev.y);
                mu = p.underflow ? kNaN : p.err;
                break;
            }
            case OpKind::Div:
                mu = eft::div_rem(ev.x, ev.y, ev.actual);
                break;
            case OpKind::Sqrt:
                mu = eft::sqrt_rem(ev.x, ev.actual);
                break;
            case OpKind::Fabs:
            case OpKind::Neg:
            case OpKind::Cast32to64:
                mu = 0.0;
                break;
            case OpKind::Cast64to32:
                mu = cfg_.mode == EngineMode::Repo ? eft::cast64to32_mu(ev.x) : 0.0;
                break;
        }
        if (fired) mu = 0.0;
        if (ro_.silentOps && ro_.silentOps->count(ev.id) > 0) mu = 0.0;

        r = compute(ev, mu, ex, ey, fired);

        if (r.isZero && r.isAbsorbed && (ex.isAbsorbed || ey.isAbsorbed))
            records_.push_back({ex.maxErrOp, ex.sndErrOp, ey.maxErrOp, ey.sndErrOp, ev.id});
    }

    if (ro_.probeOps && ro_.tempResOverride && ro_.probeOps->count(ev.id) > 0)
        (*ro_.tempResOverride)[ev.id] = r.value;

    note_trick_candidate(ev, ex, ey);
    residues_.push_back(r);
    return r;
}

void ResidueEngine::finalize(Trace& trace) {
    for (const auto& [id, res] : amended_) trace[static_cast<size_t>(id)].residue = res;
}

std::optional<TrickFire> TrickDetector::feed(const OpEvent& ev) {
    std::optional<TrickFire> fire;
    if (auto s = trick_sides(ev); s && s->otherRef.kind == ValueRef::Op) {
        const Meta& pm = meta_.at(static_cast<size_t>(s->otherRef.id));
        if (pm.candidate && pm.effConst == -s->eff)
            fire = TrickFire{s->otherRef.id, pm.otherRef, pm.otherActual};
    }
    Meta m;
    if (auto s = trick_sides(ev)) {
        m.candidate = true;
        m.effConst = s->eff;
        m.otherRef = s->otherRef;
        m.otherActual = s->otherActual;
    }
    assert(static_cast<OpId>(meta_.size()) == ev.id);
    meta_.push_back(m);
    return fire;
}

}  // namespace resdbg
