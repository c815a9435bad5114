"""Improved TreeHash: one input node per step, as many combinations as possible."""

from __future__ import annotations

from typing import Callable

from .errors import StackFault
from .structures import Node

# (node, subtree index) -> continue flag
ProcessFn = Callable[[object, int], int]


def always_continue(node, subtree) -> int:
    return 1


def combine(left: Node, right: Node, hash_children: Callable[[bytes, bytes], bytes]) -> Node:
    if left.height != right.height or left.index + 1 != right.index or left.index & 1:
        raise StackFault(
            f"({left.height}, {left.index}) and ({right.height}, {right.index}) are not siblings"
        )
    return Node(right.height + 1, right.index >> 1, hash_children(left.digest, right.digest))


def treehash_step(stack, node, process: ProcessFn, subtree: int,
                  hash_children: Callable[[bytes, bytes], bytes]) -> None:
    """Feed one node into ``stack``.

    ``process`` sees the input node and every parent produced; a zero return
    stops combining and leaves the current node off the stack (the process
    callback is expected to have captured it). Unlike the odd-only guard of
    the textbook listing, the input is always offered to ``process``: the
    lower TreeHash of the bottom subtree must capture even leaves too.
    """
    cont = process(node, subtree)
    while cont and stack and stack.top().height == node.height:
        node = combine(stack.pop(), node, hash_children)
        cont = process(node, subtree)
    if cont:
        stack.push(node)
