#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chc {

using VertexId = uint16_t;
using InstanceId = uint16_t; // logical processing slot, dense across the physical dag
using RootId = uint16_t;
using SimTime = int64_t; // nanoseconds of simulated time

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Logical clocks
//
// 64-bit value; the top `root_bits` encode the assigning root, the rest a
// per-root monotone counter. Clocks from one root order by counter; clocks
// from different roots are globally unique but carry no arrival order.
// ---------------------------------------------------------------------------

struct ClockCodec {
    unsigned root_bits = 8;

    unsigned counter_bits() const { return 64 - root_bits; }
    uint64_t max_counter() const { return (uint64_t{1} << counter_bits()) - 1; }
    uint64_t max_root() const { return (uint64_t{1} << root_bits) - 1; }
};

struct LogicalClock {
    uint64_t raw = 0;

    auto operator<=>(const LogicalClock&) const = default;
};

LogicalClock clock_new(uint32_t root_id, uint64_t counter, const ClockCodec& codec = {});
uint32_t clock_root(LogicalClock c, const ClockCodec& codec = {});
uint64_t clock_counter(LogicalClock c, const ClockCodec& codec = {});

// ---------------------------------------------------------------------------
// Flows and scopes
// ---------------------------------------------------------------------------

enum class Direction : uint8_t { forward = 0, reverse = 1 };

namespace tcp {
inline constexpr uint8_t syn = 1 << 0;
inline constexpr uint8_t ack = 1 << 1;
inline constexpr uint8_t rst = 1 << 2;
inline constexpr uint8_t fin = 1 << 3;
} // namespace tcp

struct FlowKey {
    uint32_t src_ip = 0;
    uint32_t dst_ip = 0;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint8_t proto = 0;

    auto operator<=>(const FlowKey&) const = default;
};

// The flow as seen on the wire: reverse packets swap endpoints.
FlowKey oriented(const FlowKey& flow, Direction dir);

// Direction-independent form: endpoint pairs ordered lexicographically, so
// both directions of a connection map to one key.
FlowKey canonical_flow(const FlowKey& wire);

enum class ScopeField : uint8_t { src_ip = 0, dst_ip, src_port, dst_port, proto };

// A non-empty subset of the 5-tuple fields. A scope is coarser than another
// iff its field set is a strict subset.
struct Scope {
    uint8_t fields = 0; // bitmask over ScopeField

    static Scope of(std::initializer_list<ScopeField> fs);
    bool contains(ScopeField f) const { return fields & (1u << static_cast<unsigned>(f)); }
    int field_count() const;
    bool coarser_than(const Scope& other) const; // strict subset
    bool subset_of(const Scope& other) const;
    std::string name() const;

    auto operator<=>(const Scope&) const = default;
};

inline const Scope scope_src_ip = Scope::of({ScopeField::src_ip});
inline const Scope scope_five_tuple = Scope::of({ScopeField::src_ip, ScopeField::dst_ip,
                                                 ScopeField::src_port, ScopeField::dst_port,
                                                 ScopeField::proto});

// Canonical length-prefixed encoding of the scope's fields of a flow.
// Equal projections iff the selected field values are equal.
std::string scope_project(const FlowKey& flow, const Scope& scope);

// ---------------------------------------------------------------------------
// Packets
// ---------------------------------------------------------------------------

enum class MarkKind : uint8_t { last_of_move, first_of_move, last_replay, replay };

struct Mark {
    MarkKind kind;
    std::optional<InstanceId> target; // required iff kind == replay
    uint32_t session = 0;             // handover / clone session id

    bool operator==(const Mark&) const = default;
};

struct Packet {
    LogicalClock clock;
    FlowKey flow; // client-oriented 5-tuple
    Direction direction = Direction::forward;
    uint8_t tcp_flags = 0;
    std::string payload_tag; // pre-classified application label ("ssh", "irc", ...)
    uint16_t payload_len = 0;
    uint32_t vec = 0; // update-tracking vector, zero on ingress
    std::vector<Mark> marks;

    bool has_mark(MarkKind k) const;
    const Mark* find_mark(MarkKind k) const;
    void add_mark(Mark m) { marks.push_back(std::move(m)); }
    void clear_mark(MarkKind k);

    FlowKey wire_flow() const { return oriented(flow, direction); }

    bool operator==(const Packet&) const = default;
};

// 16-bit object id | 16-bit instance id, XORed into Packet::vec per tracked
// update and reported by the store on commit.
uint32_t update_tag(InstanceId instance, uint16_t obj16);

// ---------------------------------------------------------------------------
// State keys
// ---------------------------------------------------------------------------

struct StateKey {
    VertexId vertex = 0;
    std::optional<InstanceId> instance; // present for per-flow state
    std::string obj_key;
    uint16_t obj16 = 0; // registry-assigned id for vec tags; not part of identity

    bool per_flow() const { return instance.has_value(); }
    bool shared() const { return !instance.has_value(); }

    // Identity ignores the owning instance: ownership is metadata that moves
    // during handover and failover while the object stays the same.
    std::string identity() const;
    std::string canonical() const; // full form including instance when present

    friend bool operator==(const StateKey& a, const StateKey& b) {
        return a.vertex == b.vertex && a.instance == b.instance && a.obj_key == b.obj_key;
    }
    friend auto operator<=>(const StateKey& a, const StateKey& b) {
        if (auto c = a.vertex <=> b.vertex; c != 0) return c;
        if (auto c = a.obj_key <=> b.obj_key; c != 0) return c;
        return a.instance <=> b.instance;
    }
};

StateKey shared_key(VertexId vertex, std::string_view name, uint16_t obj16 = 0);
StateKey perflow_key(VertexId vertex, InstanceId owner, std::string_view name,
                     const FlowKey& flow, uint16_t obj16 = 0);

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

class Value {
public:
    enum class Kind : uint8_t { none = 0, integer, bytes, list, map };
    using List = std::vector<Value>;
    using Map = std::map<std::string, Value>;

    Value() = default;
    Value(int64_t v) : kind_(Kind::integer), int_(v) {}
    Value(std::string v) : kind_(Kind::bytes), bytes_(std::move(v)) {}
    Value(const char* v) : Value(std::string(v)) {}
    Value(List v) : kind_(Kind::list), list_(std::move(v)) {}
    Value(Map v) : kind_(Kind::map), map_(std::move(v)) {}

    static Value none() { return Value(); }

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::none; }
    bool is_int() const { return kind_ == Kind::integer; }
    bool is_bytes() const { return kind_ == Kind::bytes; }
    bool is_list() const { return kind_ == Kind::list; }
    bool is_map() const { return kind_ == Kind::map; }

    int64_t as_int() const;
    const std::string& as_bytes() const;
    List& as_list();
    const List& as_list() const;
    Map& as_map();
    const Map& as_map() const;

    std::string canonical() const; // length-prefixed, kind-tagged encoding
    std::string debug() const;     // compact human-readable form

    bool operator==(const Value& o) const;
    bool operator!=(const Value& o) const { return !(*this == o); }

private:
    Kind kind_ = Kind::none;
    int64_t int_ = 0;
    std::string bytes_;
    List list_;
    Map map_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

enum class OpKind : uint8_t {
    increment,
    decrement,
    push,
    pop,
    compare_and_update,
    read,
    write,
    custom,
};

enum class OpMode : uint8_t { blocking, non_blocking };

struct Operation {
    OpKind kind = OpKind::read;
    std::string custom_name; // set iff kind == custom
    StateKey key;
    Value operand;
    OpMode mode = OpMode::blocking;
    LogicalClock clock; // clock of the inducing packet
    InstanceId issuer = 0;
    bool tracked = false; // XORed into the inducing packet's vec
    uint64_t op_id = 0;   // client-local, for ack matching

    bool is_mutation() const { return kind != OpKind::read; }
};

const char* op_kind_name(OpKind k);

// ---------------------------------------------------------------------------
// TS: per-instance last-executed-update clocks
// ---------------------------------------------------------------------------

struct TS {
    std::map<InstanceId, LogicalClock> entries;

    void note(InstanceId i, LogicalClock c) { entries[i] = c; }
    std::optional<LogicalClock> get(InstanceId i) const;
    bool operator==(const TS&) const = default;
    std::string debug() const;
};

// ---------------------------------------------------------------------------
// Encoding helpers (length-prefixed field concatenation; big-endian)
// ---------------------------------------------------------------------------

namespace enc {
void put_u8(std::string& out, uint8_t v);
void put_u16(std::string& out, uint16_t v);
void put_u32(std::string& out, uint32_t v);
void put_u64(std::string& out, uint64_t v);
void put_lp(std::string& out, std::string_view bytes); // u32 length prefix
uint64_t fnv1a64(std::string_view bytes);
} // namespace enc

} // namespace chc
