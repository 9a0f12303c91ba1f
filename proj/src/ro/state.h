#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "engine/residue.h"

namespace resdbg::ro {

// Persisted override-loop state, keyed per (program, input vector).
struct RunState {
    std::set<OpId> silentOps;
    std::set<OpId> probeOps;
    std::map<OpId, double> tempResOverride;
    std::map<OpId, double> resOverride;
    std::set<OpId> maxErrOps;
    std::set<OpId> sndErrOps;
    std::int64_t runCount = 0;
    std::string inputKey;
};

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Line-oriented v1 format: header (version, inputkey, runcount), then the six
// sections in fixed order; OpIds decimal ascending, values 16-hex-digit
// big-endian bit patterns.  save(load(x)) is byte-identical.
std::string save_state(const RunState& s);
RunState load_state(const std::string& bytes);

// <stateDir>/<program>/<inputKey>.v1
std::string state_path(const std::string& stateDir, const std::string& program,
                       const std::string& inputKey);

// write creates missing directories; read returns nullopt when absent.
void write_state_file(const std::string& path, const RunState& s);
std::optional<RunState> read_state_file(const std::string& path);

}  // namespace resdbg::ro
