#pragma once

// JSON schemas for graphs, elements and certificates, plus CSV tables.
// Field order is deterministic so golden files are byte-stable.

#include "taut/cohft.hpp"
#include "taut/conv.hpp"
#include "taut/homology.hpp"

#include <string>

namespace taut {

std::string graph_to_json(const Ctx &ctx, const DecGraph &g);
DecGraph graph_from_json(const Ctx &ctx, const std::string &json);

std::string conv_to_json(const Ctx &ctx, const ConvElement &x);
ConvElement conv_from_json(const Ctx &ctx, const std::string &json);

std::string frobenius_to_json(const FrobeniusData &F);
FrobeniusData frobenius_from_json(const std::string &json);

// {operation, window, residual_support, verdict}
std::string certificate_json(const Ctx &ctx, const std::string &operation,
                             const ConvElement &residual, bool pass);

std::string homology_csv(const std::vector<HomologyRow> &rows, const std::string &flavor);

} // namespace taut
