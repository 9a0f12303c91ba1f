#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

#include "kernel/inputs.h"

namespace resdbg::kernel {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

double bits_to_double(std::uint64_t bits) {
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
}

std::uint64_t double_to_bits(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    return bits;
}

bool is_hex16(const std::string& t) {
    if (t.size() != 16) return false;
    return std::all_of(t.begin(), t.end(),
                       [](unsigned char c) { return std::isxdigit(c) != 0; });
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;  // commas inside [min,max] ranges are not separators
    for (char c : text) {
        if (c == '[') ++depth;
        if (c == ']' && depth > 0) --depth;
        if ((c == ',' && depth == 0) || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

void check_param(const ParamSpec& p) {
    if (p.eMin > p.eMax) fail("exponent range has eMin > eMax");
    if (p.eMin < -1022 || p.eMax > 1023)
        fail("exponent range outside binary64 normal range [-1022, 1023]");
}

ParamSpec parse_range_sign(ParamSpec base, const std::string& key, const std::string& val) {
    if (key[0] == 'e') {
        int a, b;
        char trail;
        if (std::sscanf(val.c_str(), "[%d,%d]%c", &a, &b, &trail) != 2)
            fail("bad exponent range '" + val + "' (expected [min,max])");
        base.eMin = a;
        base.eMax = b;
    } else {
        if (val == "pos")
            base.sign = SignPolicy::Positive;
        else if (val == "mixed")
            base.sign = SignPolicy::Mixed;
        else
            fail("bad sign policy '" + val + "' (expected pos or mixed)");
    }
    return base;
}

}  // namespace

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::vector<double>> generate_inputs(const InputSpec& spec, std::size_t arity) {
    if (spec.count < 1) fail("count must be positive");
    std::vector<ParamSpec> params = spec.params;
    if (params.empty()) params.emplace_back();
    if (params.size() == 1 && arity > 1) params.assign(arity, params[0]);
    if (params.size() != arity)
        fail("input spec has " + std::to_string(params.size()) + " parameter spec(s) for " +
             std::to_string(arity) + " parameter(s)");
    for (const ParamSpec& p : params) check_param(p);

    SplitMix64 rng(spec.seed);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        std::vector<double> vec;
        vec.reserve(arity);
        for (const ParamSpec& p : params) {
            std::uint64_t w1 = rng.next();
            std::uint64_t w2 = rng.next();
            std::uint64_t span = static_cast<std::uint64_t>(p.eMax - p.eMin + 1);
            std::int64_t e = p.eMin + static_cast<std::int64_t>(w1 % span);
            std::uint64_t mantissa = w2 >> 12;
            std::uint64_t sign = (p.sign == SignPolicy::Mixed) ? (w2 & 1) : 0;
            std::uint64_t bits =
                (sign << 63) | (static_cast<std::uint64_t>(e + 1023) << 52) | mantissa;
            vec.push_back(bits_to_double(bits));
        }
        out.push_back(std::move(vec));
    }
    return out;
}

InputSpec parse_genspec(const std::string& text, std::size_t arity) {
    InputSpec spec;
    spec.params.assign(std::max<std::size_t>(arity, 1), ParamSpec{});
    bool sawPerParam = false;

    for (const std::string& tok : split_tokens(text)) {
        auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) fail("bad token '" + tok + "' (expected key=value)");
        std::string key = tok.substr(0, eq);
        std::string val = tok.substr(eq + 1);
        if (key == "seed") {
            spec.seed = std::strtoull(val.c_str(), nullptr, 0);
        } else if (key == "count") {
            spec.count = static_cast<int>(std::strtol(val.c_str(), nullptr, 10));
        } else if (key == "e" || key == "sign") {
            for (ParamSpec& p : spec.params) p = parse_range_sign(p, key, val);
        } else if ((key[0] == 'e' || key.rfind("sign", 0) == 0) && std::isdigit(
                       static_cast<unsigned char>(key.back()))) {
            std::size_t numStart = (key[0] == 'e') ? 1 : 4;
            std::size_t idx = std::strtoul(key.c_str() + numStart, nullptr, 10);
            if (idx >= spec.params.size())
                fail("parameter index " + std::to_string(idx) + " out of range");
            spec.params[idx] =
                parse_range_sign(spec.params[idx], key.substr(0, numStart), val);
            sawPerParam = true;
        } else {
            fail("unknown input-spec key '" + key + "'");
        }
    }
    // Broadcast form keeps a single entry so callers can re-broadcast later.
    if (!sawPerParam && spec.params.size() > 1 &&
        std::equal(spec.params.begin() + 1, spec.params.end(), spec.params.begin(),
                   [](const ParamSpec& a, const ParamSpec& b) {
                       return a.eMin == b.eMin && a.eMax == b.eMax && a.sign == b.sign;
                   }))
        spec.params.resize(1);
    return spec;
}

double parse_value_token(const std::string& token) {
    if (is_hex16(token)) return bits_to_double(std::strtoull(token.c_str(), nullptr, 16));
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + token.size()) fail("bad value token '" + token + "'");
    return v;
}

std::vector<std::vector<double>> parse_input_lines(const std::string& text, std::size_t arity) {
    std::vector<std::vector<double>> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::vector<std::string> toks = split_tokens(line);
        if (toks.empty()) continue;
        if (toks.size() != arity)
            fail("line " + std::to_string(lineno) + ": expected " + std::to_string(arity) +
                 " value(s), got " + std::to_string(toks.size()));
        std::vector<double> vec;
        vec.reserve(arity);
        for (const std::string& t : toks) vec.push_back(parse_value_token(t));
        out.push_back(std::move(vec));
    }
    return out;
}

std::vector<double> parse_assignments(const std::string& text,
                                      const std::vector<std::string>& params) {
    std::vector<std::string> toks = split_tokens(text);
    bool named = !toks.empty() && std::all_of(toks.begin(), toks.end(), [](const std::string& t) {
        return t.find('=') != std::string::npos;
    });
    if (named) {
        std::map<std::string, double> values;
        for (const std::string& t : toks) {
            auto eq = t.find('=');
            std::string name = t.substr(0, eq);
            if (values.count(name)) fail("duplicate assignment for '" + name + "'");
            values[name] = parse_value_token(t.substr(eq + 1));
        }
        std::vector<double> out;
        for (const std::string& p : params) {
            auto it = values.find(p);
            if (it == values.end()) fail("missing value for parameter '" + p + "'");
            out.push_back(it->second);
            values.erase(it);
        }
        if (!values.empty()) fail("unknown parameter '" + values.begin()->first + "'");
        return out;
    }
    if (toks.size() != params.size())
        fail("expected " + std::to_string(params.size()) + " value(s), got " +
             std::to_string(toks.size()));
    std::vector<double> out;
    for (const std::string& t : toks) out.push_back(parse_value_token(t));
    return out;
}

std::string input_key(const std::vector<double>& inputs) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double d : inputs) {
        std::uint64_t bits = double_to_bits(d);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llX", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace resdbg::kernel
