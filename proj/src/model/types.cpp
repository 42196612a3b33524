#include "model/types.hpp"

#include <algorithm>
#include <cctype>

#include "model/error.hpp"

namespace simclone {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::missing_shim: return "MissingShim";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::synthesis: return "SynthesisError";
    case ErrorCode::unsupported_type: return "UnsupportedType";
    case ErrorCode::store: return "StoreError";
    case ErrorCode::checksum: return "ChecksumError";
    case ErrorCode::missing_artifacts: return "MissingArtifacts";
    case ErrorCode::pool_mismatch: return "PoolMismatch";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::load: return "LoadError";
    case ErrorCode::protocol: return "ProtocolError";
    case ErrorCode::io: return "IoError";
  }
  return "Error";
}

std::string_view LanguageId::token() const noexcept {
  return name == Lang::python ? "python" : "java";
}

std::string_view LanguageId::extension() const noexcept {
  return name == Lang::python ? "py" : "java";
}

int LanguageId::default_int_width() const noexcept { return is_dynamic() ? 64 : 32; }

std::optional<LanguageId> language_from_name(std::string_view name) {
  if (name == "python") return LanguageId::python();
  if (name == "java") return LanguageId::java();
  return std::nullopt;
}

std::optional<LanguageId> language_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".py")) return LanguageId::python();
  if (ends_with(".java")) return LanguageId::java();
  return std::nullopt;
}

TypeDescriptor TypeDescriptor::integer(int bits) {
  TypeDescriptor d(Kind::integer);
  d.width_ = bits;
  return d;
}

TypeDescriptor TypeDescriptor::real(int bits) {
  TypeDescriptor d(Kind::real);
  d.width_ = bits;
  return d;
}

TypeDescriptor TypeDescriptor::array(TypeDescriptor element) {
  TypeDescriptor d(Kind::array);
  d.element_ = std::make_shared<const TypeDescriptor>(std::move(element));
  return d;
}

TypeDescriptor TypeDescriptor::object(std::vector<Member> members) {
  TypeDescriptor d(Kind::object);
  d.members_ = std::make_shared<const std::vector<Member>>(std::move(members));
  return d;
}

const TypeDescriptor& TypeDescriptor::element() const {
  if (!element_) throw Error(ErrorCode::invalid_argument, "descriptor has no element type");
  return *element_;
}

std::span<const Member> TypeDescriptor::members() const noexcept {
  if (!members_) return {};
  return {members_->data(), members_->size()};
}

bool TypeDescriptor::is_primitive() const noexcept {
  switch (kind_) {
    case Kind::boolean:
    case Kind::integer:
    case Kind::real:
    case Kind::character:
    case Kind::string:
      return true;
    default:
      return false;
  }
}

bool TypeDescriptor::well_formed() const {
  switch (kind_) {
    case Kind::integer:
    case Kind::real:
      if (width_) {
        const int w = *width_;
        if (kind_ == Kind::real ? (w != 32 && w != 64) : (w != 8 && w != 16 && w != 32 && w != 64)) {
          return false;
        }
      }
      return !element_ && !members_;
    case Kind::array:
      return element_ && !members_ && !width_ && element_->well_formed();
    case Kind::object:
      if (!members_ || members_->empty() || element_ || width_) return false;
      return std::all_of(members_->begin(), members_->end(),
                         [](const Member& m) { return !m.name.empty() && m.type.well_formed(); });
    default:
      return !element_ && !members_ && !width_;
  }
}

bool operator==(const TypeDescriptor& a, const TypeDescriptor& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Kind::integer:
    case Kind::real:
      return a.effective_width() == b.effective_width();
    case Kind::array:
      return a.element() == b.element();
    case Kind::object: {
      auto ma = a.members();
      auto mb = b.members();
      return std::equal(ma.begin(), ma.end(), mb.begin(), mb.end(),
                        [](const Member& x, const Member& y) {
                          return x.name == y.name && x.type == y.type;
                        });
    }
    default:
      return true;
  }
}

NumericBounds NumericBounds::for_languages(std::span<const LanguageId> languages) {
  NumericBounds b;
  for (const auto& lang : languages) b.int_width = std::min(b.int_width, lang.default_int_width());
  return b;
}

TypeDescriptor NumericBounds::normalize(const TypeDescriptor& desc) const {
  switch (desc.kind()) {
    case Kind::integer:
      return TypeDescriptor::integer(std::min(desc.effective_width(), int_width));
    case Kind::real:
      return TypeDescriptor::real(std::min(desc.effective_width(), real_width));
    case Kind::array:
      return TypeDescriptor::array(normalize(desc.element()));
    case Kind::object: {
      std::vector<Member> members;
      for (const auto& m : desc.members()) members.push_back({m.name, normalize(m.type), m.visibility});
      return TypeDescriptor::object(std::move(members));
    }
    default:
      return desc;
  }
}

bool cast_lattice(const TypeDescriptor& from, const TypeDescriptor& to) {
  if (from == to) return true;
  if (from.kind() == Kind::generic) return to.is_primitive() || to.kind() == Kind::generic;
  if (to.kind() == Kind::generic) return from.is_primitive();
  switch (from.kind()) {
    case Kind::boolean:
      return to.kind() == Kind::integer || to.kind() == Kind::real;
    case Kind::integer:
      if (to.kind() == Kind::integer) return from.effective_width() <= to.effective_width();
      return to.kind() == Kind::real;
    case Kind::real:
      return to.kind() == Kind::real && from.effective_width() <= to.effective_width();
    case Kind::character:
      return to.kind() == Kind::string;
    case Kind::array:
      return to.kind() == Kind::array && cast_lattice(from.element(), to.element());
    default:
      // string, object and file only cast to themselves, handled above.
      return false;
  }
}

std::string type_token(const TypeDescriptor& desc) {
  switch (desc.kind()) {
    case Kind::boolean: return "b";
    case Kind::integer: return "i" + std::to_string(desc.effective_width());
    case Kind::real: return desc.effective_width() <= 32 ? "f32" : "f64";
    case Kind::character: return "c";
    case Kind::string: return "s";
    case Kind::array: return "arr<" + type_token(desc.element()) + ">";
    case Kind::object: {
      std::string out = "obj{";
      bool first = true;
      for (const auto& m : desc.members()) {
        if (!first) out += ',';
        first = false;
        out += m.name;
        out += ':';
        out += type_token(m.type);
      }
      out += '}';
      return out;
    }
    case Kind::file: return "file";
    case Kind::generic: return "any";
  }
  return "any";
}

namespace {

std::string encode(const Signature& sig, const NumericBounds& bounds, bool with_return) {
  if (sig.args.empty()) {
    throw Error(ErrorCode::invalid_argument, "signatures with zero arguments are never admitted");
  }
  std::string out = "a:";
  for (std::size_t i = 0; i < sig.args.size(); ++i) {
    if (i) out += ',';
    out += type_token(bounds.normalize(sig.args[i]));
  }
  out += ";r:";
  out += with_return ? type_token(bounds.normalize(sig.ret)) : "any";
  return out;
}

struct TokenParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const char* what) const {
    throw Error(ErrorCode::invalid_argument,
                std::string("malformed type token (") + what + ") in '" + std::string(text) + "'");
  }

  bool consume(std::string_view s) {
    if (text.substr(pos, s.size()) == s) {
      pos += s.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view s) {
    if (!consume(s)) fail("expected literal");
  }

  TypeDescriptor parse() {
    if (consume("arr<")) {
      auto elem = parse();
      expect(">");
      return TypeDescriptor::array(std::move(elem));
    }
    if (consume("obj{")) {
      std::vector<Member> members;
      while (true) {
        const auto start = pos;
        while (pos < text.size() && text[pos] != ':') ++pos;
        if (pos == start || pos >= text.size()) fail("member name");
        std::string name(text.substr(start, pos - start));
        ++pos;
        members.push_back({std::move(name), parse(), Visibility::public_access});
        if (consume("}")) break;
        expect(",");
      }
      return TypeDescriptor::object(std::move(members));
    }
    if (consume("file")) return TypeDescriptor::file();
    if (consume("any")) return TypeDescriptor::generic();
    if (consume("f32")) return TypeDescriptor::real(32);
    if (consume("f64")) return TypeDescriptor::real(64);
    if (consume("i8")) return TypeDescriptor::integer(8);
    if (consume("i16")) return TypeDescriptor::integer(16);
    if (consume("i32")) return TypeDescriptor::integer(32);
    if (consume("i64")) return TypeDescriptor::integer(64);
    if (consume("b")) return TypeDescriptor::boolean();
    if (consume("c")) return TypeDescriptor::character();
    if (consume("s")) return TypeDescriptor::string();
    fail("unknown token");
  }
};

}  // namespace

std::string canonical_signature(const Signature& sig, const NumericBounds& bounds) {
  return encode(sig, bounds, true);
}

std::string pool_key(const Signature& sig, const NumericBounds& bounds) {
  return encode(sig, bounds, false);
}

TypeDescriptor parse_type_token(std::string_view token) {
  TokenParser p{token};
  auto d = p.parse();
  if (p.pos != token.size()) p.fail("trailing characters");
  return d;
}

Signature parse_canonical_signature(std::string_view text) {
  TokenParser p{text};
  p.expect("a:");
  Signature sig;
  while (true) {
    sig.args.push_back(p.parse());
    if (p.consume(";r:")) break;
    p.expect(",");
  }
  sig.ret = p.parse();
  if (p.pos != text.size()) p.fail("trailing characters");
  return sig;
}

}  // namespace simclone
