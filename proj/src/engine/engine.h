#pragma once
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "engine/residue.h"

namespace resdbg {

// Which residue recurrences to use.  Repo is the full corrected engine;
// the EftsanFixed baseline keeps the corrected sub/div but first-order mul,
// 2*zhat sqrt denominator, naive abs, no cast instrumentation and no trick
// detection; EftsanBuggy additionally restores the original sub/div sign bugs.
enum class EngineMode : std::uint8_t { Repo, EftsanFixed, EftsanBuggy };

struct EngineConfig {
    EngineMode mode = EngineMode::Repo;
    double condThreshold = 0x1p40;  // isZero condition-number trigger
    double absorbUlps = 4.0;        // isAbsorbed slack
    bool inheritAbsorbed = true;    // propagate isAbsorbed along maxErrOp
    bool trickDetection = true;     // Repo only
};

// Contributor tuple recorded when an absorbed residue cancels to (near) zero.
struct AbsorptionRecord {
    OpId ix = kNoneOp, jx = kNoneOp;  // e_x's maxErrOp / sndErrOp
    OpId iy = kNoneOp, jy = kNoneOp;  // e_y's maxErrOp / sndErrOp
    OpId k = kNoneOp;                 // detecting op
};

// Override-loop inputs/outputs threaded through one execution.  All pointers
// may be null (plain run).
struct RoSets {
    const std::set<OpId>* silentOps = nullptr;
    const std::set<OpId>* probeOps = nullptr;
    const std::map<OpId, double>* resOverride = nullptr;
    std::map<OpId, double>* tempResOverride = nullptr;
};

// The EFT residue backend: one instance per execution.
class ResidueEngine : public Hook {
public:
    explicit ResidueEngine(const EngineConfig& cfg, RoSets ro = {});

    Residue on_op(const OpEvent& ev) override;
    void finalize(Trace& trace) override;

    const std::vector<AbsorptionRecord>& absorptions() const { return records_; }

    // Exposed for tests: residue of a value reference as the engine sees it.
    Residue residue_of(ValueRef ref) const;

private:
    struct TrickMeta {
        // Producer candidate: add/sub with one literal operand equal to a
        // trick constant (sign folded into effConst).
        double effConst = 0.0;
        ValueRef otherRef;
        double otherActual = 0.0;
        Residue otherResidue;
        bool candidate = false;
    };

    Residue compute(const OpEvent& ev, double mu, const Residue& ex, const Residue& ey,
                    bool trickFired);
    void note_trick_candidate(const OpEvent& ev, const Residue& ex, const Residue& ey);
    bool trick_fires(const OpEvent& ev, OpId& producer);

    EngineConfig cfg_;
    RoSets ro_;
    std::vector<Residue> residues_;   // indexed by OpId
    std::vector<TrickMeta> meta_;     // indexed by OpId
    std::vector<AbsorptionRecord> records_;
    std::map<OpId, Residue> amended_;  // trick rewrites applied to the trace
};

// Detection result shared with the oracle backend, which must treat the
// rounding trick the same way as the engine to stay a fair ground truth.
struct TrickFire {
    OpId producer = kNoneOp;
    ValueRef seedRef;       // the producer's non-literal operand
    double seedActual = 0.0;
};

// Standalone structural detector over the event stream (used by backends that
// do not run the residue engine).
class TrickDetector {
public:
    std::optional<TrickFire> feed(const OpEvent& ev);

private:
    struct Meta {
        double effConst = 0.0;
        ValueRef otherRef;
        double otherActual = 0.0;
        bool candidate = false;
    };
    std::vector<Meta> meta_;
};

// Effective added constant of an add/sub with a literal operand, when the op
// can participate in the trick pattern (nullopt otherwise).
std::optional<double> trick_effective_const(const OpEvent& ev);

}  // namespace resdbg
