#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rares/scenario.hpp"

namespace rares {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SemanticError(where, what);
}

std::string line_col(std::string_view text, std::size_t byte_offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte_offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the offset one past the offending character.
  if (col > 1) --col;
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where + "." + key, "unknown field");
    }
  }
}

std::uint64_t parse_uint(const json& v, const std::string& where, std::uint64_t max) {
  std::uint64_t value = 0;
  if (v.is_number_unsigned()) {
    value = v.get<std::uint64_t>();
  } else if (v.is_number_integer()) {
    fail(where, "negative value");
  } else if (v.is_string()) {
    std::string_view s = v.get_ref<const std::string&>();
    int base = 10;
    if (s.starts_with("0x") || s.starts_with("0X")) {
      s.remove_prefix(2);
      base = 16;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(where, "not a number: \"" + v.get<std::string>() + "\"");
    }
  } else {
    fail(where, "expected a number or hex string");
  }
  if (value > max) fail(where, "value out of range (max " + std::to_string(max) + ")");
  return value;
}

Addr parse_addr(const json& v, const std::string& where) {
  return static_cast<Addr>(parse_uint(v, where, 0xFFFF));
}

bool parse_flag(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_unsigned() && v.get<std::uint64_t>() <= 1) return v.get<std::uint64_t>() == 1;
  fail(where + "." + key, "expected a boolean");
}

Bytes parse_hex(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a hex string");
  std::string_view s = v.get_ref<const std::string&>();
  if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
  try {
    return from_hex(s);
  } catch (const HexError& e) {
    fail(where, std::string("bad hex: ") + e.what());
  }
}

RegionKind parse_region(std::string_view name, const std::string& where) {
  auto kind = region_from_name(name);
  if (!kind) fail(where, "unknown region \"" + std::string(name) + "\"");
  return *kind;
}

void parse_layout(const json& obj, Scenario& sc) {
  if (!obj.is_object()) fail("layout", "expected an object");
  std::vector<Region> regions(sc.layout.regions().begin(), sc.layout.regions().end());
  for (const auto& [name, range] : obj.items()) {
    const std::string where = "layout." + name;
    const RegionKind kind = parse_region(name, where);
    if (!range.is_array() || range.size() != 2) fail(where, "expected [start, end]");
    regions[region_index(kind)] = {kind, parse_addr(range[0], where + "[0]"),
                                   parse_addr(range[1], where + "[1]")};
  }
  try {
    sc.layout = MemoryLayout::build(regions);
  } catch (const LayoutError& e) {
    fail("layout", e.what());
  }
}

void parse_trace(const json& arr, Scenario& sc) {
  if (!arr.is_array()) fail("trace", "expected an array");
  std::optional<std::uint64_t> prev;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "trace[" + std::to_string(i) + "]";
    const json& e = arr[i];
    only_keys(e, where, {"cycle", "pc", "irq", "ren", "wen", "daddr", "dma_en", "dma_addr", "data", "note"});
    if (!e.contains("cycle")) fail(where + ".cycle", "missing");
    TraceEvent te;
    te.cycle = parse_uint(e.at("cycle"), where + ".cycle", UINT64_MAX);
    if (prev && te.cycle <= *prev) {
      fail(where + ".cycle", "non-monotone cycle " + std::to_string(te.cycle) + " after " +
                                 std::to_string(*prev));
    }
    prev = te.cycle;
    AccessEvent& ev = te.event;
    if (e.contains("pc")) ev.pc = parse_addr(e.at("pc"), where + ".pc");
    if (e.contains("daddr")) ev.daddr = parse_addr(e.at("daddr"), where + ".daddr");
    if (e.contains("dma_addr")) ev.dma_addr = parse_addr(e.at("dma_addr"), where + ".dma_addr");
    if (e.contains("data")) ev.data = static_cast<Byte>(parse_uint(e.at("data"), where + ".data", 0xFF));
    ev.irq = parse_flag(e, "irq", where);
    ev.ren = parse_flag(e, "ren", where);
    ev.wen = parse_flag(e, "wen", where);
    ev.dma_en = parse_flag(e, "dma_en", where);
    if (!ev.well_formed()) fail(where, "ren and wen both set");
    sc.trace.push_back(te);
  }
}

void check_range(const MemoryLayout& layout, Addr start, Addr end, const std::string& where) {
  auto kind = layout.classify(start);
  if (start > end || !kind || !layout.contains(*kind, end)) {
    fail(where, "range " + hex16(start) + "-" + hex16(end) + " is not inside one mapped region");
  }
}

}  // namespace

Bytes default_key() {
  Bytes key(kKeySize);
  for (std::size_t i = 0; i < key.size(); ++i) key[i] = static_cast<Byte>(i);
  return key;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw SyntaxError(line_col(text, e.byte), msg);
  }

  only_keys(doc, "scenario",
            {"name", "description", "layout", "key", "memory", "golden", "tamper", "binding", "pox",
             "attest", "trace"});

  Scenario sc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    sc.name = doc["name"].get<std::string>();
  }
  if (doc.contains("layout")) parse_layout(doc["layout"], sc);

  sc.key = doc.contains("key") ? parse_hex(doc["key"], "key") : default_key();
  if (sc.key.size() != kKeySize) {
    fail("key", "key length must be 32 bytes, got " + std::to_string(sc.key.size()));
  }

  const std::size_t flash_size = sc.layout.region(RegionKind::Flash).size();
  if (sc.layout.region(RegionKind::RecoveryRom).size() < flash_size) {
    fail("layout", "RecoveryRom must be at least as large as Flash to hold the golden image");
  }

  sc.golden.assign(flash_size, 0x00);
  if (doc.contains("golden")) {
    Bytes golden = parse_hex(doc["golden"], "golden");
    if (golden.size() > flash_size) fail("golden", "longer than Flash");
    std::copy(golden.begin(), golden.end(), sc.golden.begin());
  }

  if (doc.contains("memory")) {
    const json& mem = doc["memory"];
    if (!mem.is_object()) fail("memory", "expected an object");
    for (const auto& [name, value] : mem.items()) {
      const std::string where = "memory." + name;
      const RegionKind kind = parse_region(name, where);
      if (kind == RegionKind::KeyRom) fail(where, "KeyRom is set through \"key\"");
      if (kind == RegionKind::RecoveryRom) fail(where, "RecoveryRom is set through \"golden\"");
      Bytes bytes = parse_hex(value, where);
      const std::size_t size = sc.layout.region(kind).size();
      if (bytes.size() > size) fail(where, "longer than the region");
      bytes.resize(size, 0x00);
      sc.contents[region_index(kind)] = std::move(bytes);
    }
    // Flash content without an explicit golden image is the golden image.
    if (!doc.contains("golden") && sc.contents[region_index(RegionKind::Flash)]) {
      sc.golden = *sc.contents[region_index(RegionKind::Flash)];
      sc.contents[region_index(RegionKind::Flash)].reset();
    }
  }

  if (doc.contains("tamper")) {
    const json& arr = doc["tamper"];
    if (!arr.is_array()) fail("tamper", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "tamper[" + std::to_string(i) + "]";
      only_keys(arr[i], where, {"region", "offset", "xor"});
      if (!arr[i].contains("region") || !arr[i]["region"].is_string()) fail(where + ".region", "missing");
      Tamper t;
      t.region = parse_region(arr[i]["region"].get<std::string>(), where + ".region");
      if (t.region == RegionKind::KeyRom) fail(where + ".region", "KeyRom cannot be tampered");
      t.offset = parse_uint(arr[i].value("offset", json(0u)), where + ".offset",
                            sc.layout.region(t.region).size() - 1);
      t.xor_mask = static_cast<Byte>(parse_uint(arr[i].value("xor", json(1u)), where + ".xor", 0xFF));
      sc.tampers.push_back(t);
    }
  }

  if (doc.contains("binding")) {
    const json& obj = doc["binding"];
    if (!obj.is_object()) fail("binding", "expected an object");
    for (const auto& [name, value] : obj.items()) {
      const std::string where = "binding." + name;
      auto kind = kind_from_name(name);
      if (!kind) fail(where, "unknown violation kind");
      if (!value.is_string()) fail(where, "expected an action name");
      auto action = parse_action(value.get<std::string>());
      if (!action) fail(where, "unknown action \"" + value.get<std::string>() + "\"");
      sc.binding.bind(*kind, *action);
    }
  }

  if (doc.contains("pox")) {
    const json& p = doc["pox"];
    only_keys(p, "pox", {"begin", "end", "er_min", "er_max"});
    for (const char* k : {"begin", "end", "er_min", "er_max"}) {
      if (!p.contains(k)) fail(std::string("pox.") + k, "missing");
    }
    PoxWindow w;
    w.begin_cycle = parse_uint(p["begin"], "pox.begin", UINT64_MAX);
    w.end_cycle = parse_uint(p["end"], "pox.end", UINT64_MAX);
    w.er_min = parse_addr(p["er_min"], "pox.er_min");
    w.er_max = parse_addr(p["er_max"], "pox.er_max");
    if (w.begin_cycle > w.end_cycle) fail("pox", "begin after end");
    const Region& ram = sc.layout.region(RegionKind::AppRam);
    if (w.er_min > w.er_max || !ram.contains(w.er_min) || !ram.contains(w.er_max)) {
      fail("pox", "executable region must lie inside AppRam");
    }
    sc.pox = w;
  }

  if (doc.contains("attest")) {
    const json& arr = doc["attest"];
    if (!arr.is_array()) fail("attest", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "attest[" + std::to_string(i) + "]";
      only_keys(arr[i], where, {"cycle", "nonce", "start", "end"});
      for (const char* k : {"cycle", "nonce", "start", "end"}) {
        if (!arr[i].contains(k)) fail(where + "." + k, "missing");
      }
      ScheduledAttest a;
      a.cycle = parse_uint(arr[i]["cycle"], where + ".cycle", UINT64_MAX);
      Bytes nonce = parse_hex(arr[i]["nonce"], where + ".nonce");
      if (nonce.size() != kNonceSize) fail(where + ".nonce", "nonce length must be 32 bytes");
      std::copy(nonce.begin(), nonce.end(), a.request.nonce.begin());
      a.request.region_start = parse_addr(arr[i]["start"], where + ".start");
      a.request.region_end = parse_addr(arr[i]["end"], where + ".end");
      check_range(sc.layout, a.request.region_start, a.request.region_end, where);
      sc.attests.push_back(a);
    }
    std::stable_sort(sc.attests.begin(), sc.attests.end(),
                     [](const ScheduledAttest& a, const ScheduledAttest& b) { return a.cycle < b.cycle; });
  }

  if (doc.contains("trace")) parse_trace(doc["trace"], sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

DeviceState Scenario::provisioned() const {
  DeviceState state = secureboot::provision(layout, key, golden);
  for (RegionKind kind : kAllRegionKinds) {
    if (kind == RegionKind::Flash) continue;
    const auto& bytes = contents[region_index(kind)];
    if (bytes) std::copy(bytes->begin(), bytes->end(), state.bytes(kind).begin());
  }
  state.sync_metadata();
  return state;
}

DeviceState Scenario::initial_state() const {
  DeviceState state = provisioned();
  if (const auto& flash = contents[region_index(RegionKind::Flash)]) {
    std::copy(flash->begin(), flash->end(), state.bytes(RegionKind::Flash).begin());
  }
  for (const Tamper& t : tampers) state.bytes(t.region)[t.offset] ^= t.xor_mask;
  return state;
}

}  // namespace rares
