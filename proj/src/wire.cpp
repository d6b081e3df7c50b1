#include "pf/wire.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pf::wire {

namespace {

constexpr std::size_t kMaxSenderLen = 36;
// Defensive cap: a count field this large cannot correspond to a real
// payload and would only serve to drive allocations from hostile input.
constexpr unsigned long long kMaxRecordCount = 100'000'000ULL;
constexpr long kMaxWeight = 1'000'000'000'000L;

// Tokens are printable ASCII without comma or space, so comma splitting
// and right-padding stay unambiguous.
bool valid_token(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c <= 0x20 || c > 0x7e || c == ',') return false;
    }
    return true;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Canonical value text: whole stars render bare ("4"), fractional values
// render with one decimal ("4.5"). One text per representable value.
std::string value_text(int tenths) {
    std::string s = std::to_string(tenths / 10);
    if (tenths % 10 != 0) {
        s += '.';
        s += static_cast<char>('0' + tenths % 10);
    }
    return s;
}

void validate_record(const RatingRecord& r) {
    if (r.user_id.size() != kUserIdLen || !valid_token(r.user_id)) {
        throw EncodeError("user_id must be a 36-character token");
    }
    if (!valid_token(r.item_id)) {
        throw EncodeError("item_id must be a non-empty token");
    }
    if (r.value_tenths < 10 * prefs::kMinStars || r.value_tenths > 10 * prefs::kMaxStars) {
        throw EncodeError("record value outside [1.0, 5.0]");
    }
    if (r.weight < 1 || r.weight > kMaxWeight) {
        throw EncodeError("record weight must be a positive integer");
    }
}

std::string record_line(const RatingRecord& r) {
    validate_record(r);
    std::string content = r.user_id;
    content += ',';
    content += r.item_id;
    content += ',';
    content += value_text(r.value_tenths);
    content += ',';
    content += std::to_string(r.weight);
    if (content.size() > kRecordBytes - 1) {
        throw EncodeError("record fields exceed the " + std::to_string(kRecordBytes) +
                          "-byte line layout (item_id too long)");
    }
    content.resize(kRecordBytes - 1, ' ');
    content += '\n';
    return content;
}

std::string build_header(const std::string& sender, const prefs::ContextData& ctx,
                         std::size_t n_sim, std::size_t n_nbhd) {
    std::string out = "PF";
    out += std::to_string(kProtocolVersion);
    out += ',';
    out += sender;
    out += ',';
    out += format_double(ctx.x);
    out += ',';
    out += format_double(ctx.y);
    out += ',';
    out += format_double(ctx.timestamp);
    out += ',';
    out += std::to_string(n_sim);
    out += ',';
    out += std::to_string(n_nbhd);
    out += '\n';
    return out;
}

struct FieldError {
    std::size_t offset;
    std::string detail;
};

// Splits comma-separated content, recording each field's offset within
// the parent buffer.
std::vector<std::pair<std::string_view, std::size_t>> split_fields(std::string_view content,
                                                                   std::size_t base_offset) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = content.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(content.substr(start), base_offset + start);
            return out;
        }
        out.emplace_back(content.substr(start, comma - start), base_offset + start);
        start = comma + 1;
    }
}

bool parse_canonical_count(std::string_view s, unsigned long long& out) {
    if (s.empty() || s.size() > 18) return false;
    if (s.size() > 1 && s[0] == '0') return false;  // no leading zeros
    out = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + static_cast<unsigned long long>(c - '0');
    }
    return true;
}

bool parse_double_field(std::string_view s, double& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

// Structural value parse: "d" or "d.t". Range is checked by the caller.
bool parse_value_tenths(std::string_view s, int& tenths) {
    if (s.size() == 1) {
        if (s[0] < '0' || s[0] > '9') return false;
        tenths = 10 * (s[0] - '0');
        return true;
    }
    if (s.size() == 3 && s[1] == '.') {
        if (s[0] < '0' || s[0] > '9' || s[2] < '0' || s[2] > '9') return false;
        tenths = 10 * (s[0] - '0') + (s[2] - '0');
        // "d.0" is non-canonical; whole values render bare.
        return s[2] != '0';
    }
    return false;
}

std::variant<RatingRecord, FieldError> parse_record(std::string_view line, std::size_t offset) {
    if (line.size() != kRecordBytes || line.back() != '\n') {
        return FieldError{offset + (line.empty() ? 0 : line.size() - 1),
                          "record line must be exactly 100 bytes ending in \\n"};
    }
    std::string_view content = line.substr(0, kRecordBytes - 1);
    for (std::size_t i = 0; i < content.size(); ++i) {
        if (content[i] == '\n' || content[i] == '\r') {
            return FieldError{offset + i, "embedded line break inside record"};
        }
    }
    std::size_t end = content.find_last_not_of(' ');
    if (end == std::string_view::npos) {
        return FieldError{offset, "blank record line"};
    }
    auto fields = split_fields(content.substr(0, end + 1), offset);
    if (fields.size() != 4) {
        return FieldError{offset, "expected 4 comma-separated record fields, got " +
                                      std::to_string(fields.size())};
    }
    RatingRecord r;
    if (fields[0].first.size() != kUserIdLen || !valid_token(fields[0].first)) {
        return FieldError{fields[0].second, "user_id must be a 36-character token"};
    }
    r.user_id = std::string(fields[0].first);
    if (!valid_token(fields[1].first)) {
        return FieldError{fields[1].second, "item_id must be a non-empty token"};
    }
    r.item_id = std::string(fields[1].first);
    if (!parse_value_tenths(fields[2].first, r.value_tenths) || r.value_tenths < 10 ||
        r.value_tenths > 50) {
        return FieldError{fields[2].second, "value must be canonical and within [1.0, 5.0]"};
    }
    unsigned long long w = 0;
    if (!parse_canonical_count(fields[3].first, w) || w < 1 ||
        w > static_cast<unsigned long long>(kMaxWeight)) {
        return FieldError{fields[3].second, "weight must be a canonical positive integer"};
    }
    r.weight = static_cast<long>(w);
    return r;
}

}  // namespace

bool operator==(const ExchangeMessage& a, const ExchangeMessage& b) {
    return a.version == b.version && a.sender == b.sender && a.context.x == b.context.x &&
           a.context.y == b.context.y && a.context.timestamp == b.context.timestamp &&
           a.context.tags == b.context.tags && a.similarity_payload == b.similarity_payload &&
           a.neighborhood_payload == b.neighborhood_payload;
}

std::string_view to_string(DecodeErrorKind kind) {
    switch (kind) {
        case DecodeErrorKind::Truncated: return "truncated";
        case DecodeErrorKind::BadMagic: return "bad-magic";
        case DecodeErrorKind::BadVersion: return "bad-version";
        case DecodeErrorKind::MalformedHeader: return "malformed-header";
        case DecodeErrorKind::MalformedRecord: return "malformed-record";
        case DecodeErrorKind::TrailingData: return "trailing-data";
    }
    return "unknown";
}

RatingRecord RatingRecord::own_rating(std::string user_id, std::string item_id, int stars) {
    if (stars < prefs::kMinStars || stars > prefs::kMaxStars) {
        throw EncodeError("own rating stars must be in [1, 5]");
    }
    return RatingRecord{std::move(user_id), std::move(item_id), 10 * stars, 1};
}

RatingRecord RatingRecord::aggregated(std::string item_id, double value, long weight) {
    if (!(value >= 1.0 && value <= 5.0)) {
        throw EncodeError("aggregated value outside [1.0, 5.0]");
    }
    // Round half away from zero onto the one-decimal wire grid.
    int tenths = static_cast<int>(std::floor(value * 10.0 + 0.5));
    if (tenths > 50) tenths = 50;
    return RatingRecord{std::string(kAnonymousUserId), std::move(item_id), tenths, weight};
}

std::string header_line(const ExchangeMessage& m) {
    if (m.version != kProtocolVersion) {
        throw EncodeError("unsupported protocol version " + std::to_string(m.version));
    }
    if (m.sender.empty() || m.sender.size() > kMaxSenderLen || !valid_token(m.sender)) {
        throw EncodeError("sender must be a token of at most 36 characters");
    }
    if (!std::isfinite(m.context.x) || !std::isfinite(m.context.y) ||
        !std::isfinite(m.context.timestamp) || m.context.timestamp < 0.0) {
        throw EncodeError("context stamp must be finite with timestamp >= 0");
    }
    if (!m.context.tags.empty()) {
        throw EncodeError("context tags are local-only and cannot be encoded");
    }
    return build_header(m.sender, m.context, m.similarity_payload.size(),
                        m.neighborhood_payload.size());
}

std::string encode(const ExchangeMessage& m) {
    std::string out = header_line(m);
    out.reserve(out.size() +
                kRecordBytes * (m.similarity_payload.size() + m.neighborhood_payload.size()));
    for (const auto& r : m.similarity_payload) out += record_line(r);
    for (const auto& r : m.neighborhood_payload) out += record_line(r);
    return out;
}

std::size_t payload_size(const ExchangeMessage& m) {
    return header_line(m).size() +
           kRecordBytes * (m.similarity_payload.size() + m.neighborhood_payload.size());
}

DecodeResult decode(std::string_view bytes) {
    if (bytes.size() < 2) {
        if (!bytes.empty() && bytes[0] != 'P') {
            return DecodeError{DecodeErrorKind::BadMagic, 0, "expected PF magic"};
        }
        return DecodeError{DecodeErrorKind::Truncated, bytes.size(), "incomplete header"};
    }
    if (bytes[0] != 'P' || bytes[1] != 'F') {
        return DecodeError{DecodeErrorKind::BadMagic, 0, "expected PF magic"};
    }
    std::size_t nl = bytes.find('\n');
    if (nl == std::string_view::npos) {
        return DecodeError{DecodeErrorKind::Truncated, bytes.size(), "header line not terminated"};
    }
    auto fields = split_fields(bytes.substr(0, nl), 0);
    // Version is part of the first field; report it before the field count
    // so an unknown version never reads as a generic header error.
    std::string_view magic = fields[0].first;
    unsigned long long version = 0;
    if (magic.size() < 3 || !parse_canonical_count(magic.substr(2), version)) {
        return DecodeError{DecodeErrorKind::MalformedHeader, 2, "unreadable protocol version"};
    }
    if (version != static_cast<unsigned long long>(kProtocolVersion)) {
        return DecodeError{DecodeErrorKind::BadVersion, 2,
                           "unsupported protocol version " + std::to_string(version)};
    }
    if (fields.size() != 7) {
        return DecodeError{DecodeErrorKind::MalformedHeader, 0,
                           "expected 7 comma-separated header fields, got " +
                               std::to_string(fields.size())};
    }
    ExchangeMessage m;
    m.version = static_cast<int>(version);
    if (fields[1].first.empty() || fields[1].first.size() > kMaxSenderLen ||
        !valid_token(fields[1].first)) {
        return DecodeError{DecodeErrorKind::MalformedHeader, fields[1].second,
                           "sender must be a token of at most 36 characters"};
    }
    m.sender = std::string(fields[1].first);
    if (!parse_double_field(fields[2].first, m.context.x) ||
        !parse_double_field(fields[3].first, m.context.y)) {
        return DecodeError{DecodeErrorKind::MalformedHeader, fields[2].second,
                           "context position must be finite"};
    }
    if (!parse_double_field(fields[4].first, m.context.timestamp) || m.context.timestamp < 0.0) {
        return DecodeError{DecodeErrorKind::MalformedHeader, fields[4].second,
                           "context timestamp must be finite and >= 0"};
    }
    unsigned long long n_sim = 0, n_nbhd = 0;
    if (!parse_canonical_count(fields[5].first, n_sim) || n_sim > kMaxRecordCount) {
        return DecodeError{DecodeErrorKind::MalformedHeader, fields[5].second,
                           "similarity record count unreadable"};
    }
    if (!parse_canonical_count(fields[6].first, n_nbhd) || n_nbhd > kMaxRecordCount) {
        return DecodeError{DecodeErrorKind::MalformedHeader, fields[6].second,
                           "neighborhood record count unreadable"};
    }
    // Only canonical headers are accepted: re-rendering must reproduce the
    // input bytes (catches redundant float text such as "1.50").
    std::string canonical = build_header(m.sender, m.context, n_sim, n_nbhd);
    if (bytes.substr(0, nl + 1) != canonical) {
        return DecodeError{DecodeErrorKind::MalformedHeader, 0, "non-canonical header encoding"};
    }

    const std::size_t header_len = nl + 1;
    const std::size_t n_records = static_cast<std::size_t>(n_sim + n_nbhd);
    const std::size_t expected = header_len + kRecordBytes * n_records;
    if (bytes.size() < expected) {
        return DecodeError{DecodeErrorKind::Truncated, bytes.size(),
                           "expected " + std::to_string(expected) + " bytes"};
    }
    if (bytes.size() > expected) {
        return DecodeError{DecodeErrorKind::TrailingData, expected,
                           "unexpected bytes after the last record"};
    }
    m.similarity_payload.reserve(static_cast<std::size_t>(n_sim));
    m.neighborhood_payload.reserve(static_cast<std::size_t>(n_nbhd));
    for (std::size_t i = 0; i < n_records; ++i) {
        const std::size_t offset = header_len + kRecordBytes * i;
        auto parsed = parse_record(bytes.substr(offset, kRecordBytes), offset);
        if (auto* err = std::get_if<FieldError>(&parsed)) {
            return DecodeError{DecodeErrorKind::MalformedRecord, err->offset, err->detail};
        }
        auto& r = std::get<RatingRecord>(parsed);
        if (record_line(r) != bytes.substr(offset, kRecordBytes)) {
            return DecodeError{DecodeErrorKind::MalformedRecord, offset,
                               "non-canonical record encoding"};
        }
        if (i < n_sim) {
            m.similarity_payload.push_back(std::move(r));
        } else {
            m.neighborhood_payload.push_back(std::move(r));
        }
    }
    return m;
}

}  // namespace pf::wire
