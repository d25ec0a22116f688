#pragma once

#include <string>
#include <string_view>

#include "multmodel/network.hpp"

namespace multmodel {

/// Parses MULTMODEL text (any factor kind) or a UAI factor file (tables
/// only; detected by a MARKOV/BAYES preamble). Syntax problems raise
/// ParseError with a line number; semantic problems raise FormatError.
Network parse_model(std::string_view text);

Network parse_model_file(const std::string& path);

/// Canonical serialization. Factor kinds with a dedicated block form
/// (TABLE, DGRAPH, NOISYOR, LOGLIN) keep it when their structure still
/// matches the builder shape; everything else becomes a MULT block.
/// Parameters are printed with 17 significant digits, so parsing the output
/// reproduces every double bit-exactly.
std::string write_model(const Network& net);

/// Equality of domains, factor scopes, and factor elements; kinds are
/// compared only when compare_kind is set.
bool structurally_equal(const Network& a, const Network& b,
                        bool compare_kind = false);

}  // namespace multmodel
