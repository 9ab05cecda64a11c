// document.hpp
// Text document format for state sets (schema "sqn/1"): dims, family tag,
// symbolic blocks, optionally the expanded per-party amplitudes.  Writing is
// canonical (fixed field order, 17 significant digits) so that
// serialize -> parse -> serialize is byte-identical.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqn/construction.hpp"

namespace sqn {

struct StateSetDocument {
    std::string schema = "sqn/1";
    StateSet set;
    std::optional<std::vector<ProductState>> states;
};

StateSetDocument document_from_set(const StateSet& set, bool with_amplitudes);

std::string serialize_document(const StateSetDocument& doc);

// Throws std::runtime_error on malformed input or schema mismatch.
StateSetDocument parse_document(const std::string& text);

// States to run checks against: the stored amplitudes when present,
// otherwise the expansion of the symbolic blocks.
std::vector<ProductState> document_states(const StateSetDocument& doc);

}  // namespace sqn
