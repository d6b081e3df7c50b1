#pragma once
// Exchange message format and size accounting. The encoding is a
// canonical text layout: one header line followed by fixed-width record
// lines of exactly 100 bytes each, so payload size is linear in the
// record count and byte sizes are checkable. decode() accepts exactly the
// image of encode(); anything else yields a typed error with the byte
// offset of the problem.
//
//   header:  PF1,<sender>,<x>,<y>,<t>,<n_sim>,<n_nbhd>\n
//   record:  user_id,item_id,value,weight  right-padded with spaces to
//            100 bytes including the trailing \n

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pf/prefs.hpp"

namespace pf::wire {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kRecordBytes = 100;
inline constexpr std::size_t kUserIdLen = 36;

// user_id carried on aggregated neighborhood records, which have no
// single origin peer.
inline constexpr std::string_view kAnonymousUserId =
    "000000000000000000000000000000000000";

// One rating on the wire. Values are carried at one-decimal precision
// (value_tenths in [10, 50]); own ratings are whole stars with weight 1,
// aggregated values carry their draw multiplicity as weight.
struct RatingRecord {
    std::string user_id;  // exactly 36 characters
    std::string item_id;
    int value_tenths = 0;
    long weight = 1;

    double value() const { return static_cast<double>(value_tenths) / 10.0; }

    static RatingRecord own_rating(std::string user_id, std::string item_id, int stars);
    static RatingRecord aggregated(std::string item_id, double value, long weight);

    friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

struct ExchangeMessage {
    int version = kProtocolVersion;
    std::string sender;  // peer pseudo-id, at most 36 characters
    prefs::ContextData context;
    std::vector<RatingRecord> similarity_payload;
    std::vector<RatingRecord> neighborhood_payload;

    friend bool operator==(const ExchangeMessage& a, const ExchangeMessage& b);
};

class EncodeError : public std::runtime_error {
public:
    explicit EncodeError(const std::string& what) : std::runtime_error(what) {}
};

enum class DecodeErrorKind {
    Truncated,
    BadMagic,
    BadVersion,
    MalformedHeader,
    MalformedRecord,
    TrailingData,
};

std::string_view to_string(DecodeErrorKind kind);

struct DecodeError {
    DecodeErrorKind kind;
    std::size_t offset = 0;  // byte offset where the problem starts
    std::string detail;
};

using DecodeResult = std::variant<ExchangeMessage, DecodeError>;

// Canonical encoding; throws EncodeError when a field does not fit the
// layout (over-wide item ids, bad user-id length, non-finite context,
// local-only context tags, values off the one-decimal grid).
std::string encode(const ExchangeMessage& m);

DecodeResult decode(std::string_view bytes);

// Length of encode(m) computed from the header alone: records cost
// exactly kRecordBytes each.
std::size_t payload_size(const ExchangeMessage& m);

std::string header_line(const ExchangeMessage& m);

}  // namespace pf::wire
