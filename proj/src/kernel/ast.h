#pragma once
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "engine/residue.h"

// Kernel-language AST.  Programs are lists of (define (name params...) body)
// s-expressions over binary64 arithmetic, with let/if/while, comparisons and
// calls to previously parseable functions (the call graph must be acyclic;
// calls are inlined dynamically at execution time).

namespace resdbg::kernel {

struct SourcePos {
    int line = 0;
    int col = 0;
};

enum class CmpKind : std::uint8_t { Lt, Le, Gt, Ge, Eq, Ne };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct LoopVar {
    std::string name;
    ExprPtr init;
    ExprPtr update;
};

struct Expr {
    enum Kind : std::uint8_t { Num, Var, Op, Cmp, Let, If, While, Call } kind = Num;
    SourcePos pos;

    double num = 0.0;  // Num
    std::string name;  // Var name or Call callee

    OpKind op = OpKind::Add;    // Op
    CmpKind cmp = CmpKind::Lt;  // Cmp

    // Op/Cmp operands, Call arguments, or If {cond, then, else}.
    std::vector<ExprPtr> args;

    // Let bindings (evaluated sequentially, each visible to the next).
    std::vector<std::pair<std::string, ExprPtr>> bindings;

    // While loop variables (inits and updates are parallel assignments).
    std::vector<LoopVar> loop;
    ExprPtr cond;  // While condition
    ExprPtr body;  // Let body or While result
};

struct Function {
    std::string name;
    std::vector<std::string> params;
    ExprPtr body;
    SourcePos pos;
};

struct Program {
    std::vector<Function> functions;
    std::string entry;  // the last defined function

    const Function* find(const std::string& name) const;
    const Function& entry_fn() const;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the post-parse checks (scoping, arity, call cycles, comparison
// placement); a subtype so callers can distinguish syntax from semantics.
struct ValidateError : ParseError {
    using ParseError::ParseError;
};

// Parses and validates (scoping, arity, acyclic calls, comparison positions).
Program parse_program(const std::string& text);

}  // namespace resdbg::kernel
