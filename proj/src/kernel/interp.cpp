#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include "kernel/interp.h"

namespace resdbg::kernel {

namespace {

struct Frame {
    std::vector<std::map<std::string, Value>> scopes;

    const Value* find(const std::string& name) const {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }
};

class Interp {
public:
    Interp(const Program& prog, Hook& hook, const ExecOptions& opts)
        : prog_(prog), hook_(hook), opts_(opts) {}

    ExecResult run(const std::vector<double>& inputs) {
        const Function& entry = prog_.entry_fn();
        if (inputs.size() != entry.params.size())
            throw ExecError("'" + entry.name + "' expects " +
                            std::to_string(entry.params.size()) + " input(s), got " +
                            std::to_string(inputs.size()));
        Frame frame;
        frame.scopes.emplace_back();
        for (size_t i = 0; i < inputs.size(); ++i)
            frame.scopes.back()[entry.params[i]] =
                Value{inputs[i], {ValueRef::Input, static_cast<OpId>(i)}};

        ExecResult res;
        res.output = eval(*entry.body, frame);
        timed([&] { hook_.finalize(trace_); });
        res.trace = std::move(trace_);
        res.hookSeconds = hookSeconds_;
        return res;
    }

private:
    template <class F>
    void timed(F&& f) {
        if (opts_.timing) {
            auto t0 = std::chrono::steady_clock::now();
            f();
            hookSeconds_ +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } else {
            f();
        }
    }

    Value emit(OpKind kind, const Value& x, const Value& y, bool binary, double actual) {
        if (static_cast<std::int64_t>(trace_.size()) >= opts_.maxDynOps)
            throw ExecError("dynamic operation limit exceeded (" +
                            std::to_string(opts_.maxDynOps) + " ops)");
        OpEvent ev;
        ev.id = static_cast<OpId>(trace_.size());
        ev.kind = kind;
        ev.xref = x.ref;
        ev.yref = y.ref;
        ev.x = x.actual;
        ev.y = y.actual;
        ev.actual = actual;
        ev.binary = binary;
        Residue r;
        timed([&] { r = hook_.on_op(ev); });
        trace_.push_back({ev.id, kind, actual, r});
        return Value{actual, {ValueRef::Op, ev.id}};
    }

    Value eval_op(const Expr& e, Frame& frame) {
        if (is_unary(e.op)) {
            Value x = eval(*e.args[0], frame);
            double a = 0.0;
            switch (e.op) {
                case OpKind::Sqrt: a = std::sqrt(x.actual); break;
                case OpKind::Fabs: a = std::fabs(x.actual); break;
                case OpKind::Neg: a = -x.actual; break;
                case OpKind::Cast64to32:
                    a = static_cast<double>(static_cast<float>(x.actual));
                    break;
                case OpKind::Cast32to64: a = x.actual; break;
                default: break;
            }
            return emit(e.op, x, Value{}, false, a);
        }
        Value x = eval(*e.args[0], frame);
        Value y = eval(*e.args[1], frame);
        double a = 0.0;
        switch (e.op) {
            case OpKind::Add: a = x.actual + y.actual; break;
            case OpKind::Sub: a = x.actual - y.actual; break;
            case OpKind::Mul: a = x.actual * y.actual; break;
            case OpKind::Div: a = x.actual / y.actual; break;
            default: break;
        }
        return emit(e.op, x, y, true, a);
    }

    bool eval_cond(const Expr& e, Frame& frame) {
        Value x = eval(*e.args[0], frame);
        Value y = eval(*e.args[1], frame);
        switch (e.cmp) {
            case CmpKind::Lt: return x.actual < y.actual;
            case CmpKind::Le: return x.actual <= y.actual;
            case CmpKind::Gt: return x.actual > y.actual;
            case CmpKind::Ge: return x.actual >= y.actual;
            case CmpKind::Eq: return x.actual == y.actual;
            case CmpKind::Ne: return x.actual != y.actual;
        }
        return false;
    }

    Value eval(const Expr& e, Frame& frame) {
        switch (e.kind) {
            case Expr::Num:
                return Value{e.num, {ValueRef::Literal, nextLiteral_++}};
            case Expr::Var: {
                const Value* v = frame.find(e.name);
                if (!v) throw ExecError("unbound variable '" + e.name + "'");
                return *v;
            }
            case Expr::Op:
                return eval_op(e, frame);
            case Expr::Cmp:
                throw ExecError("comparison evaluated as a value");
            case Expr::Let: {
                frame.scopes.emplace_back();
                for (const auto& [name, init] : e.bindings) {
                    Value v = eval(*init, frame);
                    frame.scopes.back()[name] = v;
                }
                Value out = eval(*e.body, frame);
                frame.scopes.pop_back();
                return out;
            }
            case Expr::If:
                return eval_cond(*e.args[0], frame) ? eval(*e.args[1], frame)
                                                    : eval(*e.args[2], frame);
            case Expr::While: {
                std::vector<Value> vals;
                vals.reserve(e.loop.size());
                for (const auto& v : e.loop) vals.push_back(eval(*v.init, frame));
                frame.scopes.emplace_back();
                for (size_t i = 0; i < e.loop.size(); ++i)
                    frame.scopes.back()[e.loop[i].name] = vals[i];
                while (eval_cond(*e.cond, frame)) {
                    // Parallel update: compute all new values against the old
                    // bindings before assigning any of them.
                    std::vector<Value> next;
                    next.reserve(e.loop.size());
                    for (const auto& v : e.loop) next.push_back(eval(*v.update, frame));
                    for (size_t i = 0; i < e.loop.size(); ++i)
                        frame.scopes.back()[e.loop[i].name] = next[i];
                }
                Value out = eval(*e.body, frame);
                frame.scopes.pop_back();
                return out;
            }
            case Expr::Call: {
                const Function& fn = *prog_.find(e.name);
                Frame callee;
                callee.scopes.emplace_back();
                for (size_t i = 0; i < e.args.size(); ++i)
                    callee.scopes.back()[fn.params[i]] = eval(*e.args[i], frame);
                return eval(*fn.body, callee);
            }
        }
        throw ExecError("malformed expression");
    }

    const Program& prog_;
    Hook& hook_;
    const ExecOptions& opts_;
    Trace trace_;
    double hookSeconds_ = 0.0;
    OpId nextLiteral_ = 0;
};

}  // namespace

ExecResult execute(const Program& prog, const std::vector<double>& inputs, Hook& hook,
                   const ExecOptions& opts) {
    Interp interp(prog, hook, opts);
    return interp.run(inputs);
}

}  // namespace resdbg::kernel
