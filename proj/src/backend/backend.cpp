#include <cstdlib>

#include "backend/backend.h"
#include "backend/dd_backend.h"
#include "backend/oracle_backend.h"

namespace resdbg::backend {

std::optional<BackendId> BackendId::parse(const std::string& name) {
    if (name == "repo") return BackendId{BackendKind::Repo, kOracleDefaultBits};
    if (name == "eftsan-fixed") return BackendId{BackendKind::EftsanFixed, kOracleDefaultBits};
    if (name == "eftsan-buggy") return BackendId{BackendKind::EftsanBuggy, kOracleDefaultBits};
    if (name == "dd") return BackendId{BackendKind::DoubleDouble, kOracleDefaultBits};
    if (name == "oracle") return BackendId{BackendKind::Oracle, kOracleDefaultBits};
    if (name.rfind("oracle:", 0) == 0) {
        const char* begin = name.c_str() + 7;
        char* end = nullptr;
        long bits = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0' || bits < kOracleMinBits || bits > kOracleMaxBits)
            return std::nullopt;
        return BackendId{BackendKind::Oracle, static_cast<int>(bits)};
    }
    return std::nullopt;
}

std::string BackendId::name() const {
    switch (kind) {
        case BackendKind::Repo: return "repo";
        case BackendKind::EftsanFixed: return "eftsan-fixed";
        case BackendKind::EftsanBuggy: return "eftsan-buggy";
        case BackendKind::DoubleDouble: return "dd";
        case BackendKind::Oracle: return "oracle:" + std::to_string(oracleBits);
    }
    return "?";
}

std::unique_ptr<Hook> make_hook(const BackendId& id, const EngineConfig& cfg, RoSets ro) {
    EngineConfig c = cfg;
    switch (id.kind) {
        case BackendKind::Repo:
            c.mode = EngineMode::Repo;
            return std::make_unique<ResidueEngine>(c, ro);
        case BackendKind::EftsanFixed:
            c.mode = EngineMode::EftsanFixed;
            return std::make_unique<ResidueEngine>(c, ro);
        case BackendKind::EftsanBuggy:
            c.mode = EngineMode::EftsanBuggy;
            return std::make_unique<ResidueEngine>(c, ro);
        case BackendKind::Oracle:
            return std::make_unique<OracleHook>(id.oracleBits);
        case BackendKind::DoubleDouble:
            return std::make_unique<DdHook>();
    }
    return nullptr;
}

}  // namespace resdbg::backend
