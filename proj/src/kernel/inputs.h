#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace resdbg::kernel {

// Deterministic input generation: uniformly chosen exponent in [eMin, eMax],
// uniform significand bits, sign per policy. Values are always finite normal
// binary64 (never NaN/Inf/subnormal).

enum class SignPolicy : std::uint8_t { Positive, Mixed };

struct ParamSpec {
    int eMin = 0;
    int eMax = 0;
    SignPolicy sign = SignPolicy::Positive;
};

struct InputSpec {
    std::uint64_t seed = 1;
    int count = 1;
    std::vector<ParamSpec> params;  // one entry broadcasts to every parameter
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64; fixed algorithm so generated inputs match across platforms.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
};

std::vector<std::vector<double>> generate_inputs(const InputSpec& spec, std::size_t arity);

// "seed=101,count=100,e=[54,250],sign=pos" with optional per-parameter
// overrides e0=[..], sign1=mixed; separators are commas and/or whitespace.
InputSpec parse_genspec(const std::string& text, std::size_t arity);

// One whitespace-separated vector per line; '#' starts a comment. A token of
// exactly 16 hex digits is an IEEE-754 bit pattern; anything else is strtod.
std::vector<std::vector<double>> parse_input_lines(const std::string& text, std::size_t arity);

// Single vector, either "x=1e99 y=2.0" (names must cover the parameters) or
// positional "1e99 2.0"; value tokens follow the input-file token rule.
std::vector<double> parse_assignments(const std::string& text,
                                      const std::vector<std::string>& params);

double parse_value_token(const std::string& token);

// FNV-1a 64 over the little-endian bytes of each value, as 16 upper hex digits.
std::string input_key(const std::vector<double>& inputs);

}  // namespace resdbg::kernel
