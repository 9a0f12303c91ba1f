#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "kernel/inputs.h"

namespace resdbg::report {

// A bundled demo program plus the seeded inputs it is meant to run on.
// `source` is the exact text shipped as corpus/<fileName>; a test keeps the
// embedded copy and the file in sync so either can be used interchangeably.
struct CorpusEntry {
    std::string name;
    std::string fileName;
    std::string source;
    std::string genspec;
    std::size_t arity = 1;
    std::string notes;

    kernel::InputSpec input_spec() const { return kernel::parse_genspec(genspec, arity); }
};

const std::vector<CorpusEntry>& bundled_corpus();

// nullptr when no entry has that name.
const CorpusEntry* find_corpus_entry(const std::string& name);

}  // namespace resdbg::report
