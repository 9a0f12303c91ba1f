#pragma once
#include <stdexcept>
#include <vector>

#include "engine/residue.h"
#include "kernel/ast.h"

namespace resdbg::kernel {

// A runtime value: the machine result plus where it came from.
struct Value {
    double actual = 0.0;
    ValueRef ref;
};

struct ExecOptions {
    std::int64_t maxDynOps = 10'000'000;
    bool timing = false;  // accumulate wall time spent inside the hook
};

struct ExecResult {
    Value output;
    Trace trace;
    double hookSeconds = 0.0;
};

struct ExecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs the entry function of `prog` on `inputs`, reporting every dynamic FP
// op to `hook` in execution order, then letting the hook finalize the trace.
// Control flow (comparisons, branch/loop decisions) follows machine values.
ExecResult execute(const Program& prog, const std::vector<double>& inputs, Hook& hook,
                   const ExecOptions& opts = {});

}  // namespace resdbg::kernel
