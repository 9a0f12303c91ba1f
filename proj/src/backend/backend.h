#pragma once
#include <memory>
#include <optional>
#include <string>

#include "engine/engine.h"

namespace resdbg::backend {

enum class BackendKind : std::uint8_t { Repo, EftsanFixed, EftsanBuggy, Oracle, DoubleDouble };

inline constexpr int kOracleMinBits = 128;
inline constexpr int kOracleMaxBits = 4096;
inline constexpr int kOracleDefaultBits = 512;

struct BackendId {
    BackendKind kind = BackendKind::Repo;
    int oracleBits = kOracleDefaultBits;

    // "repo" | "eftsan-fixed" | "eftsan-buggy" | "dd" | "oracle" | "oracle:BITS"
    static std::optional<BackendId> parse(const std::string& name);
    std::string name() const;
};

// Builds the shadow hook for one execution.  `cfg` shapes the engine-backed
// kinds (its mode field is overridden by the backend kind); `ro` threads the
// orchestrator sets into a REPO run and may be empty for plain runs.
std::unique_ptr<Hook> make_hook(const BackendId& id, const EngineConfig& cfg, RoSets ro = {});

}  // namespace resdbg::backend
