"""Object-graph capture: leaves, nesting, caps, cycles, failure tolerance."""

from __future__ import annotations

import pytest

from rundiff_collector.capture import CaptureConfig, capture_value


def cap(obj, depth=3, **kwargs):
    return capture_value(obj, "x", "LOCAL_VARIABLE", depth, CaptureConfig(depth=depth, **kwargs))


def leaves(node: dict) -> list[tuple[str, object]]:
    if node["value"] is not None:
        return [(node["name"], node["value"])]
    out = []
    for child in (node["fields"] or []) + (node["arrayElements"] or []):
        out.extend(leaves(child))
    return out


class Credential:
    def __init__(self):
        self.school = "KTH Institute"
        self.city = "Stockholm"


class Mentor:
    def __init__(self):
        self.name = "Bob"
        self.credential = Credential()


class Person:
    def __init__(self):
        self.name = "Alice"
        self.mentor = Mentor()


def test_primitive_leaves():
    assert cap(23) == {
        "kind": "LOCAL_VARIABLE", "name": "x", "type": "int",
        "value": 23, "fields": None, "arrayElements": None,
    }
    assert cap(True)["type"] == "bool" and cap(True)["value"] is True
    assert cap(2.5)["value"] == 2.5
    assert cap("hi")["value"] == "hi"


def test_none_is_a_childless_node():
    node = cap(None, depth=3)
    assert node["type"] == "NoneType"
    assert node["value"] is None and node["fields"] is None and node["arrayElements"] is None


def test_string_truncated_to_cap():
    node = cap("a" * 100, max_string_length=10)
    assert node["value"] == "a" * 10


def test_list_elements_named_by_index():
    node = cap([1, 2, 3])
    assert node["arrayElements"] is not None
    assert [(e["name"], e["value"]) for e in node["arrayElements"]] == [
        ("0", 1), ("1", 2), ("2", 3),
    ]
    assert all(e["kind"] == "ARRAY_ELEMENT" for e in node["arrayElements"])


def test_array_cap_bounds_elements():
    node = cap(list(range(100)), max_array_elements=4)
    assert len(node["arrayElements"]) == 4


def test_bytes_capture_as_elements():
    node = cap(b"\x01\x02")
    assert [e["value"] for e in node["arrayElements"]] == [1, 2]


def test_sets_capture_deterministically():
    assert cap({3, 1, 2}) == cap({2, 3, 1})


def test_dict_fields_sorted_by_key():
    node = cap({"zeta": 1, "alpha": 2})
    assert [f["name"] for f in node["fields"]] == ["alpha", "zeta"]
    assert all(f["kind"] == "FIELD" for f in node["fields"])


def test_object_fields_sorted_and_dunders_skipped():
    class Thing:
        def __init__(self):
            self.zz = 1
            self.aa = 2
            self.__dict__["__hidden__"] = 3

    node = cap(Thing())
    assert [f["name"] for f in node["fields"]] == ["aa", "zz"]


def test_slots_objects_are_captured():
    class Point:
        __slots__ = ("x", "y")

        def __init__(self):
            self.x = 1
            self.y = 2

    node = cap(Point())
    assert [(f["name"], f["value"]) for f in node["fields"]] == [("x", 1), ("y", 2)]


def test_unreadable_attribute_becomes_marker_leaf():
    class Broken:
        __slots__ = ("present", "missing")

        def __init__(self):
            self.present = 1  # "missing" stays unset: getattr raises AttributeError

    node = cap(Broken())
    by_name = {f["name"]: f for f in node["fields"]}
    assert by_name["present"]["value"] == 1
    assert by_name["missing"]["value"] == "<unreadable>"


def test_depth_zero_truncates_non_primitives():
    node = cap(Person(), depth=0)
    assert node["value"] is None and node["fields"] is None and node["arrayElements"] is None
    assert node["type"] == "Person"
    assert cap(23, depth=0)["value"] == 23  # primitives survive depth 0


@pytest.mark.parametrize(
    ("depth", "expected"),
    [
        (0, []),
        (1, [("name", "Alice")]),
        (2, [("name", "Alice"), ("name", "Bob")]),
        (3, [("name", "Alice"), ("name", "Bob"),
             ("school", "KTH Institute"), ("city", "Stockholm")]),
    ],
)
def test_nested_object_depth_semantics(depth, expected):
    assert sorted(leaves(cap(Person(), depth=depth))) == sorted(expected)


def test_cycle_guard_terminates():
    class Node:
        def __init__(self, label):
            self.label = label
            self.next = None

    a = Node("a")
    a.next = a
    for depth in range(4):
        node = cap(a, depth=depth)
        assert node["type"] == "Node"
    deep = cap(a, depth=3)
    by_name = {f["name"]: f for f in deep["fields"]}
    assert by_name["label"]["value"] == "a"
    # next points back to an object on the current path: cut despite budget
    revisit = by_name["next"]
    assert revisit["type"] == "Node"
    assert revisit["value"] is None and revisit["fields"] is None


def test_sibling_references_are_not_false_cycles():
    shared = {"k": 1}
    node = cap([shared, shared], depth=3)
    first, second = node["arrayElements"]
    assert first["fields"][0]["value"] == 1
    assert second["fields"][0]["value"] == 1  # same object twice, not a cycle


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        CaptureConfig(depth=-1)
    with pytest.raises(ValueError):
        CaptureConfig(max_array_elements=0)
