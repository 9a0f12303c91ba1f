#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ro/state.h"

namespace resdbg::ro {

namespace {

std::string hex16(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llX", static_cast<unsigned long long>(bits));
    return buf;
}

double from_hex16(const std::string& s) {
    if (s.size() != 16) throw StateError("bad value field '" + s + "'");
    char* end = nullptr;
    std::uint64_t bits = std::strtoull(s.c_str(), &end, 16);
    if (end != s.c_str() + 16) throw StateError("bad value field '" + s + "'");
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

struct LineReader {
    std::istringstream is;
    int lineno = 0;
    std::string line;
    bool pending = false;

    explicit LineReader(const std::string& text) : is(text) {}

    bool next() {
        if (pending) {
            pending = false;
            return true;
        }
        if (!std::getline(is, line)) return false;
        ++lineno;
        return true;
    }

    void push_back() { pending = true; }

    [[noreturn]] void fail(const std::string& msg) {
        throw StateError("line " + std::to_string(lineno) + ": " + msg);
    }
};

}  // namespace

std::string save_state(const RunState& s) {
    std::ostringstream os;
    os << "repo-state v1\n";
    os << "inputkey " << s.inputKey << "\n";
    os << "runcount " << s.runCount << "\n";
    os << "SILENT\n";
    for (OpId id : s.silentOps) os << "silent " << id << "\n";
    os << "PROBE\n";
    for (OpId id : s.probeOps) os << "probe " << id << "\n";
    os << "TEMP\n";
    for (const auto& [id, v] : s.tempResOverride) os << "temp " << id << " " << hex16(v) << "\n";
    os << "OVERRIDE\n";
    for (const auto& [id, v] : s.resOverride) os << "override " << id << " " << hex16(v) << "\n";
    os << "MAXERR\n";
    for (OpId id : s.maxErrOps) os << "maxerr " << id << "\n";
    os << "SNDERR\n";
    for (OpId id : s.sndErrOps) os << "snderr " << id << "\n";
    return os.str();
}

RunState load_state(const std::string& bytes) {
    LineReader r(bytes);
    if (!r.next() || r.line != "repo-state v1")
        throw StateError("unsupported state file version (expected 'repo-state v1')");

    RunState s;
    if (!r.next() || r.line.rfind("inputkey ", 0) != 0) r.fail("expected 'inputkey'");
    s.inputKey = r.line.substr(9);
    if (!r.next() || r.line.rfind("runcount ", 0) != 0) r.fail("expected 'runcount'");
    s.runCount = std::strtoll(r.line.c_str() + 9, nullptr, 10);

    auto read_set = [&](const char* header, const char* entry, std::set<OpId>& out) {
        if (!r.next() || r.line != header) r.fail(std::string("expected section ") + header);
        std::string prefix = std::string(entry) + " ";
        while (r.next()) {
            if (r.line.rfind(prefix, 0) != 0) {
                r.push_back();
                break;
            }
            out.insert(std::strtoll(r.line.c_str() + prefix.size(), nullptr, 10));
        }
    };
    auto read_map = [&](const char* header, const char* entry, std::map<OpId, double>& out) {
        if (!r.next() || r.line != header) r.fail(std::string("expected section ") + header);
        std::string prefix = std::string(entry) + " ";
        while (r.next()) {
            if (r.line.rfind(prefix, 0) != 0) {
                r.push_back();
                break;
            }
            const char* p = r.line.c_str() + prefix.size();
            char* end = nullptr;
            OpId id = std::strtoll(p, &end, 10);
            if (end == p || *end != ' ') r.fail("bad map entry");
            out[id] = from_hex16(end + 1);
        }
    };

    read_set("SILENT", "silent", s.silentOps);
    read_set("PROBE", "probe", s.probeOps);
    read_map("TEMP", "temp", s.tempResOverride);
    read_map("OVERRIDE", "override", s.resOverride);
    read_set("MAXERR", "maxerr", s.maxErrOps);
    read_set("SNDERR", "snderr", s.sndErrOps);
    if (r.next()) r.fail("trailing content");
    return s;
}

std::string state_path(const std::string& stateDir, const std::string& program,
                       const std::string& inputKey) {
    return (std::filesystem::path(stateDir) / program / (inputKey + ".v1")).string();
}

void write_state_file(const std::string& path, const RunState& s) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw StateError("cannot write state file " + path);
    f << save_state(s);
}

std::optional<RunState> read_state_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream os;
    os << f.rdbuf();
    return load_state(os.str());
}

}  // namespace resdbg::ro
