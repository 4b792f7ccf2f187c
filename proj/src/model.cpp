#include "chc/model.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace chc {

// ---------------------------------------------------------------------------
// Clocks
// ---------------------------------------------------------------------------

LogicalClock clock_new(uint32_t root_id, uint64_t counter, const ClockCodec& codec) {
    if (root_id > codec.max_root())
        throw Error("clock root id " + std::to_string(root_id) + " exceeds " +
                    std::to_string(codec.root_bits) + " bits");
    if (counter > codec.max_counter())
        throw Error("clock counter overflow: " + std::to_string(counter));
    return LogicalClock{(uint64_t{root_id} << codec.counter_bits()) | counter};
}

uint32_t clock_root(LogicalClock c, const ClockCodec& codec) {
    return static_cast<uint32_t>(c.raw >> codec.counter_bits());
}

uint64_t clock_counter(LogicalClock c, const ClockCodec& codec) {
    return c.raw & codec.max_counter();
}

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

FlowKey oriented(const FlowKey& flow, Direction dir) {
    if (dir == Direction::forward) return flow;
    return FlowKey{flow.dst_ip, flow.src_ip, flow.dst_port, flow.src_port, flow.proto};
}

FlowKey canonical_flow(const FlowKey& wire) {
    auto a = std::make_pair(wire.src_ip, wire.src_port);
    auto b = std::make_pair(wire.dst_ip, wire.dst_port);
    if (b < a) return FlowKey{wire.dst_ip, wire.src_ip, wire.dst_port, wire.src_port, wire.proto};
    return wire;
}

// ---------------------------------------------------------------------------
// Scopes
// ---------------------------------------------------------------------------

Scope Scope::of(std::initializer_list<ScopeField> fs) {
    Scope s;
    for (auto f : fs) s.fields |= (1u << static_cast<unsigned>(f));
    if (s.fields == 0) throw Error("scope must be non-empty");
    return s;
}

int Scope::field_count() const {
    int n = 0;
    for (unsigned i = 0; i < 5; ++i)
        if (fields & (1u << i)) ++n;
    return n;
}

bool Scope::subset_of(const Scope& other) const {
    return (fields & other.fields) == fields;
}

bool Scope::coarser_than(const Scope& other) const {
    return subset_of(other) && fields != other.fields;
}

std::string Scope::name() const {
    static constexpr std::array<const char*, 5> names = {"src-ip", "dst-ip", "src-port",
                                                         "dst-port", "proto"};
    std::string out;
    for (unsigned i = 0; i < 5; ++i) {
        if (!(fields & (1u << i))) continue;
        if (!out.empty()) out += "+";
        out += names[i];
    }
    return out;
}

std::string scope_project(const FlowKey& flow, const Scope& scope) {
    std::string out;
    if (scope.contains(ScopeField::src_ip)) {
        std::string f;
        enc::put_u32(f, flow.src_ip);
        enc::put_lp(out, f);
    }
    if (scope.contains(ScopeField::dst_ip)) {
        std::string f;
        enc::put_u32(f, flow.dst_ip);
        enc::put_lp(out, f);
    }
    if (scope.contains(ScopeField::src_port)) {
        std::string f;
        enc::put_u16(f, flow.src_port);
        enc::put_lp(out, f);
    }
    if (scope.contains(ScopeField::dst_port)) {
        std::string f;
        enc::put_u16(f, flow.dst_port);
        enc::put_lp(out, f);
    }
    if (scope.contains(ScopeField::proto)) {
        std::string f;
        enc::put_u8(f, flow.proto);
        enc::put_lp(out, f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Packets
// ---------------------------------------------------------------------------

bool Packet::has_mark(MarkKind k) const { return find_mark(k) != nullptr; }

const Mark* Packet::find_mark(MarkKind k) const {
    for (const auto& m : marks)
        if (m.kind == k) return &m;
    return nullptr;
}

void Packet::clear_mark(MarkKind k) {
    marks.erase(std::remove_if(marks.begin(), marks.end(),
                               [k](const Mark& m) { return m.kind == k; }),
                marks.end());
}

uint32_t update_tag(InstanceId instance, uint16_t obj16) {
    return (uint32_t{instance} << 16) | obj16;
}

// ---------------------------------------------------------------------------
// State keys
// ---------------------------------------------------------------------------

std::string StateKey::identity() const {
    std::string out;
    enc::put_u16(out, vertex);
    enc::put_lp(out, obj_key);
    return out;
}

std::string StateKey::canonical() const {
    std::string out;
    enc::put_u16(out, vertex);
    if (instance) {
        enc::put_u8(out, 1);
        enc::put_u16(out, *instance);
    } else {
        enc::put_u8(out, 0);
    }
    enc::put_lp(out, obj_key);
    return out;
}

StateKey shared_key(VertexId vertex, std::string_view name, uint16_t obj16) {
    StateKey k;
    k.vertex = vertex;
    k.obj_key = std::string(name);
    k.obj16 = obj16;
    return k;
}

StateKey perflow_key(VertexId vertex, InstanceId owner, std::string_view name,
                     const FlowKey& flow, uint16_t obj16) {
    StateKey k;
    k.vertex = vertex;
    k.instance = owner;
    k.obj_key = std::string(name);
    k.obj_key += ':';
    k.obj_key += scope_project(flow, scope_five_tuple);
    k.obj16 = obj16;
    return k;
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

int64_t Value::as_int() const {
    if (kind_ != Kind::integer) throw Error("value is not an integer: " + debug());
    return int_;
}

const std::string& Value::as_bytes() const {
    if (kind_ != Kind::bytes) throw Error("value is not bytes: " + debug());
    return bytes_;
}

Value::List& Value::as_list() {
    if (kind_ != Kind::list) throw Error("value is not a list: " + debug());
    return list_;
}

const Value::List& Value::as_list() const {
    if (kind_ != Kind::list) throw Error("value is not a list: " + debug());
    return list_;
}

Value::Map& Value::as_map() {
    if (kind_ != Kind::map) throw Error("value is not a map: " + debug());
    return map_;
}

const Value::Map& Value::as_map() const {
    if (kind_ != Kind::map) throw Error("value is not a map: " + debug());
    return map_;
}

bool Value::operator==(const Value& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
    case Kind::none: return true;
    case Kind::integer: return int_ == o.int_;
    case Kind::bytes: return bytes_ == o.bytes_;
    case Kind::list: return list_ == o.list_;
    case Kind::map: return map_ == o.map_;
    }
    return false;
}

std::string Value::canonical() const {
    std::string out;
    enc::put_u8(out, static_cast<uint8_t>(kind_));
    switch (kind_) {
    case Kind::none: break;
    case Kind::integer: enc::put_u64(out, static_cast<uint64_t>(int_)); break;
    case Kind::bytes: enc::put_lp(out, bytes_); break;
    case Kind::list:
        enc::put_u32(out, static_cast<uint32_t>(list_.size()));
        for (const auto& v : list_) enc::put_lp(out, v.canonical());
        break;
    case Kind::map:
        enc::put_u32(out, static_cast<uint32_t>(map_.size()));
        for (const auto& [k, v] : map_) {
            enc::put_lp(out, k);
            enc::put_lp(out, v.canonical());
        }
        break;
    }
    return out;
}

std::string Value::debug() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::none: os << "none"; break;
    case Kind::integer: os << int_; break;
    case Kind::bytes: os << '"' << bytes_ << '"'; break;
    case Kind::list: {
        os << '[';
        bool first = true;
        for (const auto& v : list_) {
            if (!first) os << ',';
            first = false;
            os << v.debug();
        }
        os << ']';
        break;
    }
    case Kind::map: {
        os << '{';
        bool first = true;
        for (const auto& [k, v] : map_) {
            if (!first) os << ',';
            first = false;
            os << k << ':' << v.debug();
        }
        os << '}';
        break;
    }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Operations / TS
// ---------------------------------------------------------------------------

const char* op_kind_name(OpKind k) {
    switch (k) {
    case OpKind::increment: return "inc";
    case OpKind::decrement: return "dec";
    case OpKind::push: return "push";
    case OpKind::pop: return "pop";
    case OpKind::compare_and_update: return "cau";
    case OpKind::read: return "read";
    case OpKind::write: return "write";
    case OpKind::custom: return "custom";
    }
    return "?";
}

std::optional<LogicalClock> TS::get(InstanceId i) const {
    auto it = entries.find(i);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

std::string TS::debug() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [i, c] : entries) {
        if (!first) os << ',';
        first = false;
        os << 'I' << i << ':' << c.raw;
    }
    os << '}';
    return os.str();
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace enc {

void put_u8(std::string& out, uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_lp(std::string& out, std::string_view bytes) {
    put_u32(out, static_cast<uint32_t>(bytes.size()));
    out.append(bytes);
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace enc

} // namespace chc
