#pragma once

// Synthetic labeled corpus shaped like the live protocol mix: 22 named
// protocols with made-up byte prefixes, a dark-wallet slice, and a large
// unattributed remainder. The generator keeps every payload's true label,
// which is the oracle the classifier and the share report are checked
// against.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "metascope/analytics.hpp"
#include "metascope/corpus.hpp"
#include "metascope/registry.hpp"

namespace corpusgen {

struct LabeledPayload {
    metascope::OpReturnPayload payload;
    metascope::Classification truth;
};

struct SyntheticCorpus {
    metascope::ProtocolRegistry registry;  // synthetic prefixes, one per protocol
    std::vector<LabeledPayload> items;     // shuffled
    std::map<std::string, std::uint64_t> truth_counts;  // by classification label
};

/// Per-10000 protocol mix; scaled proportionally for other totals with the
/// remainder going to unattributed.
SyntheticCorpus make_protocol_mix_corpus(std::mt19937_64& rng, std::size_t total = 10000);

/// Random corpus records for aggregation properties: uniform timestamps in
/// [2013, 2017], arbitrary labels.
std::vector<metascope::ClassifiedRecord> random_classified_records(std::mt19937_64& rng,
                                                                   std::size_t count);

}  // namespace corpusgen
