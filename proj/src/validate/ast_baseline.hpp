#pragma once

#include <span>
#include <string>
#include <vector>

#include "lang/ast.hpp"
#include "model/value.hpp"

namespace simclone::validate {

// Ordered labelled tree with identifiers, literals and type names abstracted.
struct NormTree {
  std::string label;
  std::vector<NormTree> children;

  [[nodiscard]] std::size_t size() const;
};

NormTree normalize(const lang::AstNode& node);
NormTree normalize(std::span<const lang::Statement> stmts);

// Unit-cost ordered tree edit distance (Zhang-Shasha).
std::size_t tree_edit_distance(const NormTree& a, const NormTree& b);

struct AstItem {
  std::string id;
  NormTree tree;
};

// Representative-based grouping: an item joins the first group whose
// representative is within `max_distance` edits. Groups of one are dropped.
std::vector<CloneCluster> ast_type3_clones(const std::vector<AstItem>& items, std::size_t max_distance = 1);

}  // namespace simclone::validate
