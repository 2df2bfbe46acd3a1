#pragma once

// Report serialization. JSON floats are written with 17 significant digits
// (full double round-trip), CSV cells with 12; non-finite values become null
// in JSON and literal nan/inf tokens in CSV. The writer is deliberately
// timestamp-free so identical runs produce identical bytes.

#include <ostream>
#include <string>

#include "json.hpp"

namespace triosc {

using Json = nlohmann::ordered_json;

std::string dump_json(const Json& j);

std::string csv_number(double v);

// Writes to the path when non-empty (throws UsageError when the file cannot
// be opened), otherwise to the fallback stream.
void write_text_output(const std::string& text, const std::string& path, std::ostream& fallback);

}  // namespace triosc
