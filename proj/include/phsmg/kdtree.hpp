#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "phsmg/geometry.hpp"

namespace phsmg {

/// Exact k-nearest-neighbour search over a fixed subset of 2-d points.
/// Distance ties are broken by ascending point id, so queries are fully
/// deterministic; ids refer to the caller's original point numbering.
class KdTree2d {
 public:
  KdTree2d(const std::vector<Eigen::Vector2d>& points, std::vector<int> ids)
      : ids_(std::move(ids)) {
    pts_.reserve(ids_.size());
    for (int id : ids_) pts_.push_back(points[id]);
    nodes_.reserve(ids_.size());
    std::vector<int> local(ids_.size());
    for (size_t i = 0; i < local.size(); ++i) local[i] = static_cast<int>(i);
    root_ = build(local.data(), static_cast<int>(local.size()), 0);
  }

  int size() const { return static_cast<int>(ids_.size()); }

  /// Ids of the k nearest points to q, ordered by (distance, id).
  std::vector<int> nearest(const Eigen::Vector2d& q, int k) const {
    if (k <= 0) throw Error("KdTree2d::nearest: k must be positive");
    if (k > size())
      throw Error("KdTree2d::nearest: requested " + std::to_string(k) +
                  " neighbours from a set of " + std::to_string(size()));
    std::vector<Entry> heap;
    heap.reserve(k);
    search(root_, q, k, heap);
    std::sort(heap.begin(), heap.end(), entry_less);
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = ids_[heap[i].local];
    return out;
  }

 private:
  struct Node {
    int local;
    int left = -1, right = -1;
    int axis;
  };
  struct Entry {
    double d2;
    int id;  // global id, for tie-breaking
    int local;
  };

  static bool entry_less(const Entry& a, const Entry& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id;
  }

  int build(int* idx, int n, int depth) {
    if (n == 0) return -1;
    const int axis = depth % 2;
    const int mid = n / 2;
    std::nth_element(idx, idx + mid, idx + n, [&](int a, int b) {
      const double ca = pts_[a][axis], cb = pts_[b][axis];
      return ca != cb ? ca < cb : ids_[a] < ids_[b];
    });
    Node node;
    node.local = idx[mid];
    node.axis = axis;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(idx, mid, depth + 1);
    nodes_[self].right = build(idx + mid + 1, n - mid - 1, depth + 1);
    return self;
  }

  void search(int ni, const Eigen::Vector2d& q, int k, std::vector<Entry>& heap) const {
    if (ni < 0) return;
    const Node& node = nodes_[ni];
    const Eigen::Vector2d& p = pts_[node.local];
    const Entry cand{(p - q).squaredNorm(), ids_[node.local], node.local};
    if (static_cast<int>(heap.size()) < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), entry_less);
    } else if (entry_less(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), entry_less);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), entry_less);
    }

    const double diff = q[node.axis] - p[node.axis];
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    search(near, q, k, heap);
    // The far half-plane can still hold an equal-distance, lower-id point,
    // so it is pruned only on a strict distance excess.
    if (static_cast<int>(heap.size()) < k || diff * diff <= heap.front().d2)
      search(far, q, k, heap);
  }

  std::vector<int> ids_;
  std::vector<Eigen::Vector2d> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace phsmg
