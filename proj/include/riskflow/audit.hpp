#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "riskflow/time.hpp"

namespace riskflow {

struct AuditEntry {
    std::uint64_t seq = 0;
    Timestamp timestamp{};
    std::string actor;
    std::string operation;
    std::string summary;
    std::string prev_hash;
    std::string entry_hash;

    friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

inline constexpr std::string_view kGenesisHash =
    "0000000000000000000000000000000000000000000000000000000000000000";

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Digest over a length-prefixed encoding of (seq, timestamp, actor,
/// operation, summary, prev_hash).
std::string compute_entry_hash(const AuditEntry& entry);

/// Builds the next chained entry after `log` (seq = size + 1).
AuditEntry make_entry(std::span<const AuditEntry> log, Timestamp when, std::string actor,
                      std::string operation, std::string summary);

/// Throws Error "AuditChainBroken" naming the first bad seq (1-based position).
void verify_chain(std::span<const AuditEntry> log);

} // namespace riskflow
