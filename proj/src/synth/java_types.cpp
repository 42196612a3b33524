#include "synth/java_types.hpp"

#include <map>

namespace simclone::synth {

namespace {

constexpr int kMaxDepth = 4;

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ') out += c;
  }
  return out;
}

// Splits "Map<A,List<B>>" style argument lists at top-level commas.
std::vector<std::string> split_type_args(std::string_view inner) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : inner) {
    if (c == '<') ++depth;
    if (c == '>') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::optional<TypeDescriptor> primitive(std::string_view t) {
  static const std::map<std::string, TypeDescriptor, std::less<>> table = {
      {"boolean", TypeDescriptor::boolean()},  {"Boolean", TypeDescriptor::boolean()},
      {"byte", TypeDescriptor::integer(8)},    {"Byte", TypeDescriptor::integer(8)},
      {"short", TypeDescriptor::integer(16)},  {"Short", TypeDescriptor::integer(16)},
      {"int", TypeDescriptor::integer(32)},    {"Integer", TypeDescriptor::integer(32)},
      {"long", TypeDescriptor::integer(64)},   {"Long", TypeDescriptor::integer(64)},
      {"char", TypeDescriptor::character()},   {"Character", TypeDescriptor::character()},
      {"float", TypeDescriptor::real(32)},     {"Float", TypeDescriptor::real(32)},
      {"double", TypeDescriptor::real(64)},    {"Double", TypeDescriptor::real(64)},
      {"String", TypeDescriptor::string()},    {"java.lang.String", TypeDescriptor::string()},
      {"CharSequence", TypeDescriptor::string()},
      {"File", TypeDescriptor::file()},        {"java.io.File", TypeDescriptor::file()},
      {"Scanner", TypeDescriptor::file()},     {"BufferedReader", TypeDescriptor::file()},
      {"FileReader", TypeDescriptor::file()},  {"InputStream", TypeDescriptor::file()},
      {"FileInputStream", TypeDescriptor::file()}};
  auto it = table.find(t);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool is_list_type(std::string_view base) {
  return base == "List" || base == "ArrayList" || base == "LinkedList" || base == "java.util.List" ||
         base == "java.util.ArrayList";
}

std::optional<TypeDescriptor> arg_type(std::string_view declared, const lang::ParsedFile& file, int depth);

std::optional<TypeDescriptor> object_arg(const lang::ClassInfo& cls, const lang::ParsedFile& file, int depth) {
  for (const auto& ctor : cls.constructors) {
    if (ctor.empty()) continue;
    std::vector<Member> members;
    bool ok = true;
    for (const auto& p : ctor) {
      auto t = arg_type(p.declared_type, file, depth + 1);
      if (!t) {
        ok = false;
        break;
      }
      members.push_back({p.name, *t, Visibility::public_access});
    }
    if (ok) return TypeDescriptor::object(std::move(members));
  }
  return std::nullopt;
}

std::optional<TypeDescriptor> arg_type(std::string_view declared, const lang::ParsedFile& file, int depth) {
  if (depth > kMaxDepth) return std::nullopt;
  const std::string t = strip_spaces(declared);
  if (t.size() > 2 && t.ends_with("[]")) {
    auto elem = arg_type(std::string_view(t).substr(0, t.size() - 2), file, depth + 1);
    if (!elem) return std::nullopt;
    return TypeDescriptor::array(*elem);
  }
  if (auto p = primitive(t)) return p;
  const auto lt = t.find('<');
  if (lt != std::string::npos && t.back() == '>') {
    const std::string base = t.substr(0, lt);
    if (!is_list_type(base)) return std::nullopt;
    auto args = split_type_args(std::string_view(t).substr(lt + 1, t.size() - lt - 2));
    if (args.size() != 1) return std::nullopt;
    auto elem = arg_type(args[0], file, depth + 1);
    if (!elem) return std::nullopt;
    return TypeDescriptor::array(*elem);
  }
  if (const auto* cls = file.find_class(t)) return object_arg(*cls, file, depth);
  return std::nullopt;
}

void return_leaves(const std::string& declared, const lang::ParsedFile& file, const std::string& path, int depth,
                   std::vector<ReturnLeaf>& out) {
  if (depth > kMaxDepth) return;
  const std::string t = strip_spaces(declared);
  if (auto d = arg_type(t, file, 0); d && d->kind() != Kind::object) {
    out.push_back({path, *d, t});
    return;
  }
  const auto* cls = file.find_class(t);
  if (!cls) return;
  for (const auto& f : cls->fields) {
    if (f.is_static || f.visibility == Visibility::private_access) continue;
    return_leaves(f.declared_type, file, path + "." + f.name, depth + 1, out);
  }
}

}  // namespace

std::optional<TypeDescriptor> java_arg_type(std::string_view declared, const lang::ParsedFile& file) {
  return arg_type(declared, file, 0);
}

std::vector<ReturnLeaf> java_return_leaves(std::string_view declared, const lang::ParsedFile& file) {
  std::vector<ReturnLeaf> out;
  return_leaves(std::string(declared), file, "", 0, out);
  return out;
}

std::string java_default_value(std::string_view declared) {
  const std::string t = strip_spaces(declared);
  if (t == "boolean") return "false";
  if (t == "char") return "'\\0'";
  if (t == "byte" || t == "short" || t == "int") return "0";
  if (t == "long") return "0L";
  if (t == "float") return "0f";
  if (t == "double") return "0.0";
  return "null";
}

}  // namespace simclone::synth
