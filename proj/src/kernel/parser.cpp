#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "kernel/ast.h"

namespace resdbg::kernel {

namespace {

struct SExpr {
    bool isAtom = false;
    std::string atom;
    std::vector<SExpr> items;
    SourcePos pos;
};

[[noreturn]] void fail(SourcePos pos, const std::string& msg) {
    std::ostringstream os;
    os << pos.line << ":" << pos.col << ": " << msg;
    throw ParseError(os.str());
}

[[noreturn]] void vfail(SourcePos pos, const std::string& msg) {
    std::ostringstream os;
    os << pos.line << ":" << pos.col << ": " << msg;
    throw ValidateError(os.str());
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_ws();
        while (pos_ < text_.size()) {
            out.push_back(read_one());
            skip_ws();
        }
        return out;
    }

private:
    SourcePos here() const { return {line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read_one() {
        SourcePos at = here();
        if (text_[pos_] == '(') {
            advance();
            SExpr list;
            list.pos = at;
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != ')') {
                list.items.push_back(read_one());
                skip_ws();
            }
            if (pos_ >= text_.size()) fail(at, "unterminated '('");
            advance();  // ')'
            return list;
        }
        if (text_[pos_] == ')') fail(at, "unexpected ')'");
        SExpr atom;
        atom.isAtom = true;
        atom.pos = at;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\r' ||
                c == '\n')
                break;
            atom.atom += c;
            advance();
        }
        return atom;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

const std::map<std::string, OpKind> kBinaryOps = {
    {"+", OpKind::Add}, {"-", OpKind::Sub}, {"*", OpKind::Mul}, {"/", OpKind::Div}};

const std::map<std::string, OpKind> kUnaryOps = {{"sqrt", OpKind::Sqrt},
                                                 {"fabs", OpKind::Fabs},
                                                 {"neg", OpKind::Neg},
                                                 {"cast64to32", OpKind::Cast64to32},
                                                 {"cast32to64", OpKind::Cast32to64}};

const std::map<std::string, CmpKind> kCmps = {{"<", CmpKind::Lt},  {"<=", CmpKind::Le},
                                              {">", CmpKind::Gt},  {">=", CmpKind::Ge},
                                              {"==", CmpKind::Eq}, {"!=", CmpKind::Ne}};

ExprPtr lower(const SExpr& s);

ExprPtr lower_expr(const SExpr& s) {
    auto e = lower(s);
    if (e->kind == Expr::Cmp)
        fail(s.pos, "comparison used as a value (only allowed as if/while condition)");
    return e;
}

ExprPtr lower_cond(const SExpr& s) {
    auto e = lower(s);
    if (e->kind != Expr::Cmp) fail(s.pos, "condition must be a comparison");
    return e;
}

ExprPtr lower(const SExpr& s) {
    auto e = std::make_unique<Expr>();
    e->pos = s.pos;
    if (s.isAtom) {
        double v;
        if (parse_number(s.atom, v)) {
            e->kind = Expr::Num;
            e->num = v;
        } else {
            e->kind = Expr::Var;
            e->name = s.atom;
        }
        return e;
    }
    if (s.items.empty()) fail(s.pos, "empty form");
    const SExpr& head = s.items[0];
    if (!head.isAtom) fail(head.pos, "operator or keyword expected");
    const std::string& h = head.atom;
    size_t n = s.items.size() - 1;

    if (h == "-" && n == 1) {
        e->kind = Expr::Op;
        e->op = OpKind::Neg;
        e->args.push_back(lower_expr(s.items[1]));
        return e;
    }
    if (auto it = kBinaryOps.find(h); it != kBinaryOps.end()) {
        if (n != 2) fail(s.pos, "'" + h + "' expects 2 operands");
        e->kind = Expr::Op;
        e->op = it->second;
        e->args.push_back(lower_expr(s.items[1]));
        e->args.push_back(lower_expr(s.items[2]));
        return e;
    }
    if (auto it = kUnaryOps.find(h); it != kUnaryOps.end()) {
        if (n != 1) fail(s.pos, "'" + h + "' expects 1 operand");
        e->kind = Expr::Op;
        e->op = it->second;
        e->args.push_back(lower_expr(s.items[1]));
        return e;
    }
    if (auto it = kCmps.find(h); it != kCmps.end()) {
        if (n != 2) fail(s.pos, "'" + h + "' expects 2 operands");
        e->kind = Expr::Cmp;
        e->cmp = it->second;
        e->args.push_back(lower_expr(s.items[1]));
        e->args.push_back(lower_expr(s.items[2]));
        return e;
    }
    if (h == "let") {
        if (n != 2 || s.items[1].isAtom) fail(s.pos, "let expects a binding list and a body");
        e->kind = Expr::Let;
        for (const SExpr& b : s.items[1].items) {
            if (b.isAtom || b.items.size() != 2 || !b.items[0].isAtom)
                fail(b.pos, "let binding must be (name expr)");
            e->bindings.emplace_back(b.items[0].atom, lower_expr(b.items[1]));
        }
        e->body = lower_expr(s.items[2]);
        return e;
    }
    if (h == "if") {
        if (n != 3) fail(s.pos, "if expects condition, then, else");
        e->kind = Expr::If;
        e->args.push_back(lower_cond(s.items[1]));
        e->args.push_back(lower_expr(s.items[2]));
        e->args.push_back(lower_expr(s.items[3]));
        return e;
    }
    if (h == "while") {
        if (n != 3 || s.items[2].isAtom)
            fail(s.pos, "while expects condition, loop-variable list, result");
        e->kind = Expr::While;
        e->cond = lower_cond(s.items[1]);
        for (const SExpr& v : s.items[2].items) {
            if (v.isAtom || v.items.size() != 3 || !v.items[0].isAtom)
                fail(v.pos, "loop variable must be (name init update)");
            LoopVar lv;
            lv.name = v.items[0].atom;
            lv.init = lower_expr(v.items[1]);
            lv.update = lower_expr(v.items[2]);
            e->loop.push_back(std::move(lv));
        }
        e->body = lower_expr(s.items[3]);
        return e;
    }
    // Anything else is a call; existence and arity are validated afterwards.
    e->kind = Expr::Call;
    e->name = h;
    for (size_t i = 1; i <= n; ++i) e->args.push_back(lower_expr(s.items[i]));
    return e;
}

struct Validator {
    const Program& prog;
    std::set<std::string> visiting;  // call-cycle detection
    std::set<std::string> done;

    void check_fn(const Function& fn) {
        if (done.count(fn.name)) return;
        if (visiting.count(fn.name)) throw ValidateError("recursive call cycle through '" + fn.name + "'");
        visiting.insert(fn.name);
        std::vector<std::set<std::string>> scopes;
        scopes.emplace_back(fn.params.begin(), fn.params.end());
        check(*fn.body, scopes);
        visiting.erase(fn.name);
        done.insert(fn.name);
    }

    bool bound(const std::string& name, const std::vector<std::set<std::string>>& scopes) {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
            if (it->count(name)) return true;
        return false;
    }

    void check(const Expr& e, std::vector<std::set<std::string>>& scopes) {
        switch (e.kind) {
            case Expr::Num:
                break;
            case Expr::Var:
                if (!bound(e.name, scopes)) vfail(e.pos, "unbound variable '" + e.name + "'");
                break;
            case Expr::Op:
            case Expr::Cmp:
                for (const auto& a : e.args) check(*a, scopes);
                break;
            case Expr::Let: {
                scopes.emplace_back();
                for (const auto& [name, init] : e.bindings) {
                    check(*init, scopes);
                    scopes.back().insert(name);
                }
                check(*e.body, scopes);
                scopes.pop_back();
                break;
            }
            case Expr::If:
                for (const auto& a : e.args) check(*a, scopes);
                break;
            case Expr::While: {
                for (const auto& v : e.loop) check(*v.init, scopes);
                scopes.emplace_back();
                for (const auto& v : e.loop) scopes.back().insert(v.name);
                check(*e.cond, scopes);
                for (const auto& v : e.loop) check(*v.update, scopes);
                check(*e.body, scopes);
                scopes.pop_back();
                break;
            }
            case Expr::Call: {
                const Function* callee = prog.find(e.name);
                if (!callee) vfail(e.pos, "unknown operator or function '" + e.name + "'");
                if (callee->params.size() != e.args.size())
                    vfail(e.pos, "'" + e.name + "' expects " +
                                    std::to_string(callee->params.size()) + " argument(s)");
                for (const auto& a : e.args) check(*a, scopes);
                check_fn(*callee);
                break;
            }
        }
    }
};

}  // namespace

const Function* Program::find(const std::string& name) const {
    for (const Function& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

const Function& Program::entry_fn() const {
    return *find(entry);
}

Program parse_program(const std::string& text) {
    Reader reader(text);
    std::vector<SExpr> forms = reader.read_all();
    if (forms.empty()) throw ParseError("no (define ...) forms found");

    Program p;
    for (const SExpr& form : forms) {
        if (form.isAtom || form.items.size() != 3 || !form.items[0].isAtom ||
            form.items[0].atom != "define")
            fail(form.pos, "top-level form must be (define (name params...) body)");
        const SExpr& sig = form.items[1];
        if (sig.isAtom || sig.items.empty() || !sig.items[0].isAtom)
            fail(sig.pos, "function signature must be (name params...)");
        Function fn;
        fn.pos = form.pos;
        fn.name = sig.items[0].atom;
        if (p.find(fn.name)) fail(sig.pos, "redefinition of '" + fn.name + "'");
        for (size_t i = 1; i < sig.items.size(); ++i) {
            if (!sig.items[i].isAtom) fail(sig.items[i].pos, "parameter name expected");
            fn.params.push_back(sig.items[i].atom);
        }
        fn.body = lower_expr(form.items[2]);
        p.functions.push_back(std::move(fn));
    }
    p.entry = p.functions.back().name;

    Validator v{p, {}, {}};
    for (const Function& f : p.functions) v.check_fn(f);
    return p;
}

}  // namespace resdbg::kernel
