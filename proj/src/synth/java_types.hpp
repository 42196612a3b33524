#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lang/ast.hpp"
#include "model/types.hpp"

namespace simclone::synth {

// Descriptor for a Java declared type used as an argument, or nullopt when the
// type cannot be generated. Corpus classes become objects whose members are
// the parameters of their first fully supported constructor.
std::optional<TypeDescriptor> java_arg_type(std::string_view declared, const lang::ParsedFile& file);

// A leaf reachable from a returned value: `path` is the member access chain
// ("" for the value itself, ".length", ".inner.x", ...).
struct ReturnLeaf {
  std::string path;
  TypeDescriptor type;
  std::string declared;  // Java spelling of the leaf type
};

// Leaves produced by expanding a returned Java value of type `declared`.
// Primitive-like types yield one leaf with an empty path; corpus classes expand
// over non-private fields recursively. Empty when nothing is returnable.
std::vector<ReturnLeaf> java_return_leaves(std::string_view declared, const lang::ParsedFile& file);

// Zero/false/null literal for a Java type, used for prologue declarations.
std::string java_default_value(std::string_view declared);

}  // namespace simclone::synth
