#include "riskflow/audit.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "riskflow/error.hpp"

namespace riskflow {

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        throw Error("DigestFailure", "SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0f]);
    }
    return out;
}

namespace {

void append_field(std::string& out, std::string_view field) {
    out += std::to_string(field.size());
    out += ':';
    out += field;
    out += ',';
}

} // namespace

std::string compute_entry_hash(const AuditEntry& entry) {
    std::string encoded;
    append_field(encoded, std::to_string(entry.seq));
    append_field(encoded, format_timestamp(entry.timestamp));
    append_field(encoded, entry.actor);
    append_field(encoded, entry.operation);
    append_field(encoded, entry.summary);
    append_field(encoded, entry.prev_hash);
    return sha256_hex(encoded);
}

AuditEntry make_entry(std::span<const AuditEntry> log, Timestamp when, std::string actor,
                      std::string operation, std::string summary) {
    AuditEntry entry;
    entry.seq = log.size() + 1;
    entry.timestamp = when;
    entry.actor = std::move(actor);
    entry.operation = std::move(operation);
    entry.summary = std::move(summary);
    entry.prev_hash = log.empty() ? std::string(kGenesisHash) : log.back().entry_hash;
    entry.entry_hash = compute_entry_hash(entry);
    return entry;
}

void verify_chain(std::span<const AuditEntry> log) {
    std::string_view expected_prev = kGenesisHash;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& entry = log[i];
        const std::uint64_t position = i + 1;
        const char* problem = nullptr;
        if (entry.seq != position) {
            problem = "sequence number out of place";
        } else if (entry.prev_hash != expected_prev) {
            problem = "prev_hash does not match the preceding entry";
        } else if (entry.entry_hash != compute_entry_hash(entry)) {
            problem = "entry_hash does not match the entry contents";
        }
        if (problem) {
            throw Error("AuditChainBroken",
                        "audit chain broken at entry " + std::to_string(position) + ": " + problem,
                        {{"seq", position}});
        }
        expected_prev = entry.entry_hash;
    }
}

} // namespace riskflow
