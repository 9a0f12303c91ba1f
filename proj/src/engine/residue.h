#pragma once
#include <cstdint>
#include <string>
#include <vector>

// Core value/trace types shared by the interpreter, the residue engine, the
// shadow backends and the override orchestrator.

namespace resdbg {

using OpId = std::int64_t;
inline constexpr OpId kNoneOp = -1;

enum class OpKind : std::uint8_t {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Fabs,
    Neg,
    Cast64to32,
    Cast32to64,
};

const char* op_name(OpKind k);

struct Residue {
    double value = 0.0;
    OpId maxErrOp = kNoneOp;  // largest contributor operation
    OpId sndErrOp = kNoneOp;  // second-largest contributor operation
    bool isAbsorbed = false;
    bool isZero = false;
};

// Where an operand value came from.  Inputs and literals carry exact values
// (zero residue); ops index the per-run residue/shadow tables.
struct ValueRef {
    enum Kind : std::uint8_t { Input, Literal, Op } kind = Literal;
    OpId id = kNoneOp;  // parameter index / literal ordinal / OpId
};

// One dynamic floating-point operation, as reported to a shadow hook.
struct OpEvent {
    OpId id = kNoneOp;
    OpKind kind = OpKind::Add;
    ValueRef xref, yref;
    double x = 0.0, y = 0.0;  // actual operand values (y unused when unary)
    double actual = 0.0;      // actual machine result
    bool binary = false;
};

struct TraceRecord {
    OpId id = kNoneOp;
    OpKind kind = OpKind::Add;
    double actual = 0.0;
    Residue residue;
};

using Trace = std::vector<TraceRecord>;

// Shadow-execution hook.  on_op is called exactly once per dynamic FP op in
// execution order; finalize may amend already-recorded residues (used by the
// rounding-trick detector to rewrite the producer op of a matched pair).
class Hook {
public:
    virtual ~Hook() = default;
    virtual Residue on_op(const OpEvent& ev) = 0;
    virtual void finalize(Trace& trace) { (void)trace; }
};

inline bool is_unary(OpKind k) {
    return k == OpKind::Sqrt || k == OpKind::Fabs || k == OpKind::Neg ||
           k == OpKind::Cast64to32 || k == OpKind::Cast32to64;
}

}  // namespace resdbg
