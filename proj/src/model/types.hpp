#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simclone {

enum class Lang { python, java };
enum class Typing { static_typing, dynamic_typing };

struct LanguageId {
  Lang name = Lang::python;
  Typing typing = Typing::dynamic_typing;

  static LanguageId python() { return {Lang::python, Typing::dynamic_typing}; }
  static LanguageId java() { return {Lang::java, Typing::static_typing}; }

  [[nodiscard]] std::string_view token() const noexcept;
  [[nodiscard]] std::string_view extension() const noexcept;
  // Width given to a plain integer declared without an explicit size.
  [[nodiscard]] int default_int_width() const noexcept;
  [[nodiscard]] bool is_dynamic() const noexcept {
    return typing == Typing::dynamic_typing;
  }

  friend bool operator==(const LanguageId&, const LanguageId&) = default;
};

std::optional<LanguageId> language_from_name(std::string_view name);
std::optional<LanguageId> language_from_path(std::string_view path);

enum class Kind { boolean, integer, real, character, string, array, object, file, generic };

enum class Visibility { public_access, package_access, protected_access, private_access };

struct Member;

// Immutable descriptor tree; copies share their sub-trees.
class TypeDescriptor {
 public:
  TypeDescriptor() : TypeDescriptor(Kind::generic) {}

  static TypeDescriptor boolean() { return TypeDescriptor(Kind::boolean); }
  static TypeDescriptor integer(int bits = 32);
  static TypeDescriptor real(int bits = 64);
  static TypeDescriptor character() { return TypeDescriptor(Kind::character); }
  static TypeDescriptor string() { return TypeDescriptor(Kind::string); }
  static TypeDescriptor array(TypeDescriptor element);
  static TypeDescriptor object(std::vector<Member> members);
  static TypeDescriptor file() { return TypeDescriptor(Kind::file); }
  static TypeDescriptor generic() { return TypeDescriptor(Kind::generic); }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::optional<int> bit_width() const noexcept { return width_; }
  // Width with the model defaults filled in (64 when absent).
  [[nodiscard]] int effective_width() const noexcept { return width_.value_or(64); }
  [[nodiscard]] const TypeDescriptor& element() const;
  [[nodiscard]] std::span<const Member> members() const noexcept;

  [[nodiscard]] bool is_primitive() const noexcept;
  [[nodiscard]] bool well_formed() const;

  // Structural equality; member visibility is not part of the identity.
  friend bool operator==(const TypeDescriptor& a, const TypeDescriptor& b);

 private:
  explicit TypeDescriptor(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<int> width_;
  std::shared_ptr<const TypeDescriptor> element_;
  std::shared_ptr<const std::vector<Member>> members_;
};

struct Member {
  std::string name;
  TypeDescriptor type;
  Visibility visibility = Visibility::public_access;
};

struct Signature {
  std::vector<TypeDescriptor> args;
  TypeDescriptor ret;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Integer/real width ceilings used when functions of several languages must
// share one input pool.
struct NumericBounds {
  int int_width = 64;
  int real_width = 64;

  static NumericBounds for_languages(std::span<const LanguageId> languages);

  [[nodiscard]] TypeDescriptor normalize(const TypeDescriptor& desc) const;

  friend bool operator==(const NumericBounds&, const NumericBounds&) = default;
};

// True iff `from` widens to `to` under bool < int < real, char < string,
// width ordering, element-wise arrays, identical objects, file-to-file and
// generic <-> any primitive.
bool cast_lattice(const TypeDescriptor& from, const TypeDescriptor& to);

std::string type_token(const TypeDescriptor& desc);
std::string canonical_signature(const Signature& sig, const NumericBounds& bounds = {});
// Key of the memoized input pool: the argument part of the canonical
// signature with the return slot fixed to `any`.
std::string pool_key(const Signature& sig, const NumericBounds& bounds = {});

// Inverse of canonical_signature (no bound normalization is undone).
TypeDescriptor parse_type_token(std::string_view token);
Signature parse_canonical_signature(std::string_view text);

}  // namespace simclone
