"""Height-balanced CF-tree used to pick a single candidate cluster per point.

Leaf nodes hold cluster CFs; inner nodes hold the summed CF of each child.
Lookup descends greedily to the nearest child centroid at every level, which
is fast but not guaranteed to reach the globally nearest cluster.
"""

import numpy as np

from .. import kernels


class CFNode:
    __slots__ = ("leaf", "children", "ls", "n", "ss", "size")

    def __init__(self, leaf, d, capacity):
        self.leaf = leaf
        # cluster ids in a leaf, CFNode objects otherwise
        self.children = []
        self.ls = np.zeros((capacity, d))
        self.n = np.zeros(capacity)
        self.ss = np.zeros(capacity)
        self.size = 0

    def append(self, child, ls, n, ss):
        j = self.size
        self.ls[j] = ls
        self.n[j] = n
        self.ss[j] = ss
        self.children.append(child)
        self.size += 1
        return j

    def cf_sum(self):
        m = self.size
        return self.ls[:m].sum(axis=0), float(self.n[:m].sum()), float(self.ss[:m].sum())


class CFTree:
    """CF-tree with branching factor ``branching`` over ``d``-dimensional points."""

    def __init__(self, d, branching=50):
        if branching < 2:
            raise ValueError("branching factor must be >= 2")
        self.d = d
        self.branching = branching
        self.root = None
        self.height = 0

    def _new_node(self, leaf):
        return CFNode(leaf, self.d, self.branching + 1)

    def descend(self, x):
        """Greedy nearest-child descent.

        Returns ``(path, cluster_id, dist2)``: ``path`` lists ``(node, row)`` for
        every node visited including the leaf; ``cluster_id`` is ``None`` for an
        empty tree.
        """
        path = []
        node = self.root
        if node is None:
            return path, None, np.inf
        while True:
            j, d2 = kernels.nearest_cf(x, node.ls, node.n, node.size)
            path.append((node, j))
            if node.leaf:
                return path, node.children[j], d2
            node = node.children[j]

    def candidate(self, x):
        """The single candidate cluster id for ``x`` (``None`` when the tree is empty)."""
        return self.descend(x)[1]

    def absorb(self, path, x):
        """Account for ``x`` joining the cluster at the end of ``path``."""
        xx = float(x @ x)
        for node, j in path:
            node.ls[j] += x
            node.n[j] += 1.0
            node.ss[j] += xx

    def add_cluster(self, path, cluster_id, x):
        """Register a new singleton cluster next to the leaf reached by ``path``."""
        xx = float(x @ x)
        if self.root is None:
            self.root = self._new_node(leaf=True)
            self.root.append(cluster_id, x, 1.0, xx)
            self.height = 1
            return
        for node, j in path[:-1]:
            node.ls[j] += x
            node.n[j] += 1.0
            node.ss[j] += xx
        leaf = path[-1][0]
        leaf.append(cluster_id, x, 1.0, xx)
        if leaf.size > self.branching:
            self._split(leaf, path[:-1])

    def _split(self, node, ancestors):
        m = node.size
        cent = node.ls[:m] / node.n[:m, None]
        sq = np.einsum("ij,ij->i", cent, cent)
        d2 = sq[:, None] + sq[None, :] - 2.0 * cent @ cent.T
        a, b = np.unravel_index(int(np.argmax(d2)), d2.shape)
        if a == b:
            a, b = 0, m - 1
        to_b = d2[:, b] < d2[:, a]
        to_b[a] = False
        to_b[b] = True

        left = self._new_node(node.leaf)
        right = self._new_node(node.leaf)
        for j in range(m):
            target = right if to_b[j] else left
            target.append(node.children[j], node.ls[j], node.n[j], node.ss[j])

        if not ancestors:
            root = self._new_node(leaf=False)
            for child in (left, right):
                root.append(child, *child.cf_sum())
            self.root = root
            self.height += 1
            return
        parent, row = ancestors[-1]
        parent.children[row] = left
        ls, n, ss = left.cf_sum()
        parent.ls[row] = ls
        parent.n[row] = n
        parent.ss[row] = ss
        parent.append(right, *right.cf_sum())
        if parent.size > self.branching:
            self._split(parent, ancestors[:-1])

    # ------------------------------------------------------------------
    # inspection helpers

    def iter_nodes(self):
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            yield node
            if not node.leaf:
                stack.extend(node.children)

    def leaf_entries(self):
        """``{cluster_id: (ls, n, ss)}`` as stored in the leaves."""
        out = {}
        for node in self.iter_nodes():
            if node.leaf:
                for j, cid in enumerate(node.children):
                    out[cid] = (node.ls[j].copy(), node.n[j], node.ss[j])
        return out

    def check(self, rtol=1e-9, atol=1e-9):
        """Verify CF additivity and the branching bound everywhere; returns a list of problems."""
        problems = []
        depths = set()

        def walk(node, depth):
            if node.size > self.branching:
                problems.append(f"node with {node.size} > {self.branching} children")
            if node.size != len(node.children):
                problems.append("row count and child list disagree")
            if node.leaf:
                depths.add(depth)
                return
            for j, child in enumerate(node.children):
                ls, n, ss = child.cf_sum()
                if n != node.n[j]:
                    problems.append(f"count mismatch {n} != {node.n[j]}")
                if not np.allclose(ls, node.ls[j], rtol=rtol, atol=atol):
                    problems.append("linear-sum mismatch")
                if not np.isclose(ss, node.ss[j], rtol=rtol, atol=atol):
                    problems.append("squared-sum mismatch")
                walk(child, depth + 1)

        if self.root is not None:
            walk(self.root, 1)
        if len(depths) > 1:
            problems.append(f"leaves at different depths {sorted(depths)}")
        return problems
