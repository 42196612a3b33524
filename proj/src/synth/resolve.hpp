#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "lang/ast.hpp"
#include "synth/dataflow.hpp"

namespace simclone::synth {

// Names visible from a Java method body: parameters and locals (any depth),
// fields and methods of the enclosing classes.
class JavaScope {
 public:
  JavaScope(const lang::ParsedFile& file, const lang::FunctionInfo& fn);

  [[nodiscard]] std::optional<std::string> declared_type(const std::string& name) const;
  [[nodiscard]] NameRole role(const std::string& name) const;
  [[nodiscard]] NameRole callee_role(const std::string& name) const;
  [[nodiscard]] std::string qualify(const std::string& name) const;

 private:
  struct FieldRef {
    std::string owner;  // qualified class name
    const lang::FieldInfo* field;
  };
  std::map<std::string, std::string> locals_;
  std::map<std::string, FieldRef> fields_;
  std::map<std::string, std::string> static_methods_;
  std::set<std::string> instance_methods_;
};

NameResolver python_resolver(const lang::ParsedFile& file);
NameResolver java_resolver(std::shared_ptr<const JavaScope> scope);

}  // namespace simclone::synth
