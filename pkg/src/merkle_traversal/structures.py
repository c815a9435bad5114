"""Nodes, stacks and the retained right-node tree shared by Exist and Desired."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import MissingNode, SlotCollision, StackFault
from .hashing import PrngState


@dataclass(frozen=True, slots=True)
class Node:
    height: int
    index: int
    digest: bytes

    @property
    def is_right(self) -> bool:
        return bool(self.index & 1)


class _Dummy:
    """Stand-in for the skipped first bottom-level node of a Desired tree."""

    __slots__ = ()

    def __repr__(self):
        return "DUMMY"


DUMMY = _Dummy()

AuthPath = Sequence[Node]


class NodeStack:
    """TreeHash stack; heights strictly increase from top to bottom."""

    def __init__(self):
        self._items: list[Node] = []

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __iter__(self):
        return iter(self._items)

    def top(self) -> Node:
        return self._items[-1]

    def pop(self) -> Node:
        return self._items.pop()

    def push(self, node: Node) -> None:
        if self._items and self._items[-1].height <= node.height:
            raise StackFault(
                f"push of height {node.height} onto height {self._items[-1].height}"
            )
        self._items.append(node)


class SharedStack:
    """One stack shared by all lower TreeHash instances.

    Each instance sees only its own segment. A segment may be buried under a
    newer one, but it must be back on top before it is pushed or popped.
    """

    def __init__(self):
        self._items: list[tuple[int, Node]] = []
        self._counts: dict[int, int] = {}
        self.peak = 0

    def __len__(self):
        return len(self._items)

    def segment(self, owner: int) -> "StackSegment":
        return StackSegment(self, owner)

    def count(self, owner: int) -> int:
        return self._counts.get(owner, 0)

    def _check_top(self, owner: int) -> None:
        if self._items and self._items[-1][0] != owner:
            raise StackFault(
                f"segment of instance {owner} is buried under instance {self._items[-1][0]}"
            )

    def top(self, owner: int) -> Node:
        self._check_top(owner)
        return self._items[-1][1]

    def peek(self, owner: int) -> Node:
        """Topmost node of ``owner``'s segment, buried or not."""
        for who, node in reversed(self._items):
            if who == owner:
                return node
        raise IndexError(f"instance {owner} has no nodes on the shared stack")

    def pop(self, owner: int) -> Node:
        self._check_top(owner)
        self._counts[owner] -= 1
        return self._items.pop()[1]

    def push(self, owner: int, node: Node) -> None:
        if self.count(owner):
            top = self.top(owner)
            if top.height <= node.height:
                raise StackFault(f"push of height {node.height} onto height {top.height}")
        self._items.append((owner, node))
        self._counts[owner] = self._counts.get(owner, 0) + 1
        self.peak = max(self.peak, len(self._items))


class StackSegment:
    __slots__ = ("_shared", "_owner")

    def __init__(self, shared: SharedStack, owner: int):
        self._shared = shared
        self._owner = owner

    def __len__(self):
        return self._shared.count(self._owner)

    def __bool__(self):
        return self._shared.count(self._owner) > 0

    def top(self) -> Node:
        return self._shared.top(self._owner)

    def pop(self) -> Node:
        return self._shared.pop(self._owner)

    def push(self, node: Node) -> None:
        self._shared.push(self._owner, node)


def slot_of(bottom: int, root: int, height: int, index: int) -> tuple[int, int]:
    """Map a right node to its (relative level, slot) inside a subtree.

    Nodes at the same position relative to their h-subtree root share a slot,
    which is what lets an Exist tree and its Desired successor share storage.
    """
    if not bottom <= height < root:
        raise ValueError(f"height {height} outside subtree levels [{bottom}, {root})")
    if not index & 1:
        raise ValueError(f"only right nodes are retained, got index {index}")
    return height - bottom, (index % (1 << (root - height))) >> 1


class RetainTree:
    """2^h - 1 slots holding right nodes only."""

    def __init__(self, bottom: int, root: int):
        self.bottom = bottom
        self.root = root
        self.slots: list[list[Optional[Node]]] = [
            [None] * (1 << (root - r - 1)) for r in range(bottom, root)
        ]
        self.count = 0

    @property
    def capacity(self) -> int:
        return (1 << (self.root - self.bottom)) - 1

    def slot_of(self, height: int, index: int) -> tuple[int, int]:
        return slot_of(self.bottom, self.root, height, index)

    def add(self, node: Node) -> None:
        r, s = self.slot_of(node.height, node.index)
        held = self.slots[r][s]
        if held is not None:
            raise SlotCollision(
                f"slot ({r}, {s}) holds ({held.height}, {held.index}); "
                f"cannot add ({node.height}, {node.index})"
            )
        self.slots[r][s] = node
        self.count += 1

    def _find(self, height: int, index: int) -> tuple[int, int, Node]:
        r, s = self.slot_of(height, index)
        held = self.slots[r][s]
        if held is None or held.index != index:
            what = "empty" if held is None else f"holds index {held.index}"
            raise MissingNode(f"node ({height}, {index}) not retained: slot ({r}, {s}) {what}")
        return r, s, held

    def get(self, height: int, index: int) -> Node:
        return self._find(height, index)[2]

    def remove(self, height: int, index: int) -> None:
        r, s, _ = self._find(height, index)
        self.slots[r][s] = None
        self.count -= 1

    def holds(self, height: int, index: int) -> bool:
        """True iff exactly this (height, index) is retained."""
        if not (self.bottom <= height < self.root and index & 1):
            return False
        r, s = self.slot_of(height, index)
        held = self.slots[r][s]
        return held is not None and held.index == index

    def nodes(self) -> list[Node]:
        return [n for level in self.slots for n in level if n is not None]


@dataclass
class Subtree:
    bottom: int
    root: int
    tree: RetainTree
    next_index: int
    stack_high: Optional[NodeStack] = None
    bottom_node: object = None  # Node, DUMMY or None
    prng: Optional[PrngState] = None
    finished: bool = field(default=False, repr=False)

    @property
    def active(self) -> bool:
        """Whether a Desired tree is currently under construction."""
        return self.stack_high is not None
