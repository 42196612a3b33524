#include "validate/ast_baseline.hpp"

#include <algorithm>
#include <map>

namespace simclone::validate {

using lang::NodeKind;

std::size_t NormTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

bool keeps_text(NodeKind k) {
  switch (k) {
    case NodeKind::binary:
    case NodeKind::unary:
    case NodeKind::compare:
    case NodeKind::logical:
    case NodeKind::assign:
    case NodeKind::incdec:
    case NodeKind::condition:
      return true;
    default:
      return false;
  }
}

NormTree statement_tree(const lang::Statement& s) {
  NormTree t{"stmt:" + std::string(lang::stmt_kind_name(s.kind)), {}};
  t.children.push_back(normalize(s.head));
  for (const auto& c : s.clauses) {
    NormTree clause{"clause", {}};
    clause.children.push_back(normalize(c.header));
    for (const auto& b : c.body) clause.children.push_back(statement_tree(b));
    t.children.push_back(std::move(clause));
  }
  return t;
}

// Postorder numbering with leftmost leaf descendants, 1-based.
struct Indexed {
  std::vector<const NormTree*> nodes;
  std::vector<std::size_t> lml;
  std::vector<std::size_t> keyroots;

  explicit Indexed(const NormTree& root) {
    nodes.push_back(nullptr);
    lml.push_back(0);
    walk(root);
    std::map<std::size_t, std::size_t> highest;  // lml -> highest node having it
    for (std::size_t i = 1; i < nodes.size(); ++i) highest[lml[i]] = i;
    for (const auto& [l, i] : highest) keyroots.push_back(i);
    std::sort(keyroots.begin(), keyroots.end());
  }

  std::size_t walk(const NormTree& t) {
    std::size_t first = 0;
    for (const auto& c : t.children) {
      const std::size_t idx = walk(c);
      if (first == 0) first = lml[idx];
    }
    nodes.push_back(&t);
    lml.push_back(first == 0 ? nodes.size() - 1 : first);
    return nodes.size() - 1;
  }
};

void histogram(const NormTree& t, std::map<std::string, long>& h, long sign) {
  h[t.label] += sign;
  for (const auto& c : t.children) histogram(c, h, sign);
}

// Lower bound on the edit distance from label counts and sizes.
std::size_t distance_lower_bound(const NormTree& a, const NormTree& b) {
  std::map<std::string, long> h;
  histogram(a, h, 1);
  histogram(b, h, -1);
  long surplus = 0;
  long deficit = 0;
  for (const auto& [label, n] : h) (n > 0 ? surplus : deficit) += std::abs(n);
  return static_cast<std::size_t>(std::max(surplus, deficit));
}

}  // namespace

NormTree normalize(const lang::AstNode& node) {
  NormTree t;
  t.label = std::string(lang::node_kind_name(node.kind));
  if (keeps_text(node.kind) && !node.text.empty()) t.label += ":" + node.text;
  for (const auto& c : node.children) t.children.push_back(normalize(c));
  return t;
}

NormTree normalize(std::span<const lang::Statement> stmts) {
  NormTree root{"snippet", {}};
  for (const auto& s : stmts) root.children.push_back(statement_tree(s));
  return root;
}

std::size_t tree_edit_distance(const NormTree& a, const NormTree& b) {
  const Indexed x(a);
  const Indexed y(b);
  const std::size_t n = x.nodes.size() - 1;
  const std::size_t m = y.nodes.size() - 1;
  std::vector<std::vector<std::size_t>> td(n + 1, std::vector<std::size_t>(m + 1, 0));
  std::vector<std::vector<std::size_t>> fd(n + 2, std::vector<std::size_t>(m + 2, 0));
  for (std::size_t i : x.keyroots) {
    for (std::size_t j : y.keyroots) {
      const std::size_t li = x.lml[i];
      const std::size_t lj = y.lml[j];
      // fd indices are offset so that li-1 / lj-1 map to 0
      fd[0][0] = 0;
      for (std::size_t di = li; di <= i; ++di) fd[di - li + 1][0] = fd[di - li][0] + 1;
      for (std::size_t dj = lj; dj <= j; ++dj) fd[0][dj - lj + 1] = fd[0][dj - lj] + 1;
      for (std::size_t di = li; di <= i; ++di) {
        for (std::size_t dj = lj; dj <= j; ++dj) {
          const std::size_t r = di - li + 1;
          const std::size_t c = dj - lj + 1;
          const std::size_t del = fd[r - 1][c] + 1;
          const std::size_t ins = fd[r][c - 1] + 1;
          if (x.lml[di] == li && y.lml[dj] == lj) {
            const std::size_t rel = fd[r - 1][c - 1] + (x.nodes[di]->label == y.nodes[dj]->label ? 0 : 1);
            fd[r][c] = std::min({del, ins, rel});
            td[di][dj] = fd[r][c];
          } else {
            const std::size_t pr = x.lml[di] - li;
            const std::size_t pc = y.lml[dj] - lj;
            fd[r][c] = std::min({del, ins, fd[pr][pc] + td[di][dj]});
          }
        }
      }
    }
  }
  return td[n][m];
}

std::vector<CloneCluster> ast_type3_clones(const std::vector<AstItem>& items, std::size_t max_distance) {
  std::vector<CloneCluster> groups;
  std::vector<const AstItem*> reps;
  std::vector<std::size_t> rep_size;
  for (const auto& item : items) {
    const std::size_t size = item.tree.size();
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      const std::size_t diff = size > rep_size[g] ? size - rep_size[g] : rep_size[g] - size;
      if (diff > max_distance) continue;
      if (distance_lower_bound(item.tree, reps[g]->tree) > max_distance) continue;
      if (tree_edit_distance(item.tree, reps[g]->tree) <= max_distance) {
        groups[g].members.push_back(item.id);
        placed = true;
      }
    }
    if (!placed) {
      CloneCluster c;
      c.members.push_back(item.id);
      c.representative = item.id;
      c.sim_t = 1.0;
      groups.push_back(std::move(c));
      reps.push_back(&item);
      rep_size.push_back(size);
    }
  }
  std::erase_if(groups, [](const CloneCluster& c) { return c.members.size() < 2; });
  return groups;
}

}  // namespace simclone::validate
