#include "forcing/hfset.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace forcing {

struct HfSet::Node {
  std::vector<HfSet> children;  // strictly ascending, no duplicates
  std::size_t rank = 0;
  std::size_t id = 0;
  std::size_t hash = 0;
};

namespace {

struct ChildKeyHash {
  std::size_t operator()(const std::vector<std::size_t>& ids) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t v : ids) h = h * 1099511628211ull ^ (v + 0x9e3779b9);
    return h;
  }
};

struct InternPool {
  std::mutex mu;
  std::unordered_map<std::vector<std::size_t>, std::unique_ptr<HfSet::Node>,
                     ChildKeyHash>
      table;
  std::size_t next_id = 0;

  const HfSet::Node* intern(std::vector<HfSet> children) {
    std::vector<std::size_t> key;
    key.reserve(children.size());
    for (HfSet c : children) key.push_back(c.id());
    std::scoped_lock lock(mu);
    auto it = table.find(key);
    if (it != table.end()) return it->second.get();
    auto node = std::make_unique<HfSet::Node>();
    std::size_t r = 0;
    for (HfSet c : children) r = std::max(r, c.rank() + 1);
    node->children = std::move(children);
    node->rank = r;
    node->id = next_id++;
    node->hash = ChildKeyHash{}(key);
    const HfSet::Node* raw = node.get();
    table.emplace(std::move(key), std::move(node));
    return raw;
  }
};

InternPool& pool() {
  static InternPool* p = new InternPool;  // never freed
  return *p;
}

const HfSet::Node* empty_node() {
  static const HfSet::Node* n = pool().intern({});
  return n;
}

}  // namespace

HfSet::HfSet() : node_(empty_node()) {}

HfSet HfSet::make(std::vector<HfSet> elems) {
  std::sort(elems.begin(), elems.end(),
            [](HfSet a, HfSet b) { return a < b; });
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return HfSet(pool().intern(std::move(elems)));
}

std::span<const HfSet> HfSet::children() const { return node_->children; }
std::size_t HfSet::rank() const { return node_->rank; }
std::size_t HfSet::id() const { return node_->id; }

std::strong_ordering HfSet::compare(HfSet a, HfSet b) {
  if (a == b) return std::strong_ordering::equal;
  auto ca = a.children(), cb = b.children();
  std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = compare(ca[i], cb[i]);
    if (c != std::strong_ordering::equal) return c;
  }
  return ca.size() <=> cb.size();
}

std::size_t HfSet::Hash::operator()(HfSet s) const { return s.node_->hash; }

bool mem(HfSet x, HfSet y) {
  auto c = y.children();
  return std::binary_search(c.begin(), c.end(), x,
                            [](HfSet a, HfSet b) { return a < b; });
}

bool subset(HfSet x, HfSet y) {
  auto cx = x.children();
  return std::all_of(cx.begin(), cx.end(), [&](HfSet z) { return mem(z, y); });
}

bool is_transitive(HfSet x) {
  for (HfSet y : x.children())
    if (!subset(y, x)) return false;
  return true;
}

std::size_t rank(HfSet x) { return x.rank(); }

namespace {
void collect_tc(HfSet x, std::vector<HfSet>& out) {
  for (HfSet y : x.children()) {
    out.push_back(y);
    collect_tc(y, out);
  }
}
}  // namespace

HfSet transitive_closure(HfSet x) {
  std::vector<HfSet> elems;
  collect_tc(x, elems);
  return HfSet::make(std::move(elems));
}

HfSet empty_set() { return HfSet(); }
HfSet singleton(HfSet x) { return HfSet::make({x}); }
HfSet pair(HfSet x, HfSet y) { return HfSet::make({x, y}); }
HfSet opair(HfSet x, HfSet y) {
  return pair(singleton(x), pair(x, y));
}

std::optional<std::pair<HfSet, HfSet>> as_opair(HfSet x) {
  auto c = x.children();
  if (c.size() == 1) {
    // {{a}} encodes <a,a>
    auto inner = c[0].children();
    if (inner.size() == 1) return std::pair{inner[0], inner[0]};
    return std::nullopt;
  }
  if (c.size() != 2) return std::nullopt;
  // one child must be {a}, the other {a,b}
  for (int i = 0; i < 2; ++i) {
    auto s = c[i].children(), t = c[1 - i].children();
    if (s.size() == 1 && t.size() == 2 && mem(s[0], c[1 - i])) {
      HfSet a = s[0];
      HfSet b = (t[0] == a) ? t[1] : t[0];
      if (x == opair(a, b)) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

HfSet domain(HfSet r) {
  std::vector<HfSet> firsts;
  for (HfSet m : r.children())
    if (auto p = as_opair(m)) firsts.push_back(p->first);
  return HfSet::make(std::move(firsts));
}

HfSet cartprod(HfSet a, HfSet b) {
  std::vector<HfSet> elems;
  for (HfSet x : a.children())
    for (HfSet y : b.children()) elems.push_back(opair(x, y));
  return HfSet::make(std::move(elems));
}

HfSet union_of(HfSet x) {
  std::vector<HfSet> elems;
  for (HfSet y : x.children())
    for (HfSet z : y.children()) elems.push_back(z);
  return HfSet::make(std::move(elems));
}

bool is_ordinal(HfSet x) {
  if (!is_transitive(x)) return false;
  auto c = x.children();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!mem(c[i], c[j]) && !mem(c[j], c[i])) return false;
  return true;
}

HfSet nat(std::size_t n) {
  HfSet x;
  std::vector<HfSet> elems;
  for (std::size_t i = 0; i < n; ++i) {
    elems.push_back(x);
    x = HfSet::make(elems);
  }
  return x;
}

std::optional<std::size_t> as_nat(HfSet x) {
  if (!is_ordinal(x)) return std::nullopt;
  return x.card();
}

HfSet vset(std::size_t n) {
  HfSet stage;
  for (std::size_t i = 0; i < n; ++i) {
    auto c = stage.children();
    if (c.size() > 25) throw std::invalid_argument("vset: stage too large");
    std::vector<HfSet> subs;
    subs.reserve(std::size_t{1} << c.size());
    for (std::size_t mask = 0; mask < (std::size_t{1} << c.size()); ++mask) {
      std::vector<HfSet> elems;
      for (std::size_t b = 0; b < c.size(); ++b)
        if (mask & (std::size_t{1} << b)) elems.push_back(c[b]);
      subs.push_back(HfSet::make(std::move(elems)));
    }
    stage = HfSet::make(std::move(subs));
  }
  return stage;
}

std::optional<std::size_t> least(const std::function<bool(std::size_t)>& pred,
                                 std::size_t bound) {
  for (std::size_t k = 0; k < bound; ++k)
    if (pred(k)) return k;
  return std::nullopt;
}

namespace {

struct HfParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("HF parse error at position " +
                                std::to_string(pos) + ": " + msg);
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  HfSet parse_set() {
    char c = peek();
    if (c == '0') {
      ++pos;
      return HfSet();
    }
    if (c == '{') {
      ++pos;
      std::vector<HfSet> elems;
      if (peek() == '}') {
        ++pos;
        return HfSet();
      }
      elems.push_back(parse_set());
      while (peek() == ',') {
        ++pos;
        elems.push_back(parse_set());
      }
      expect('}');
      return HfSet::make(std::move(elems));
    }
    if (c == '<') {
      ++pos;
      HfSet a = parse_set();
      expect(',');
      HfSet b = parse_set();
      expect('>');
      return opair(a, b);
    }
    fail("expected '0', '{' or '<'");
  }
};

void print_hf_rec(HfSet x, std::string& out) {
  if (x.is_empty()) {
    out += '0';
    return;
  }
  out += '{';
  bool first = true;
  for (HfSet y : x.children()) {
    if (!first) out += ',';
    first = false;
    print_hf_rec(y, out);
  }
  out += '}';
}

}  // namespace

HfSet parse_hf(std::string_view text) {
  HfParser p{text};
  HfSet v = p.parse_set();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return v;
}

std::string print_hf(HfSet x) {
  std::string out;
  print_hf_rec(x, out);
  return out;
}

}  // namespace forcing
