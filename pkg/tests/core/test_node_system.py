"""
Pruebas del grafo de nodos: caché, propagación, orden y ciclos
"""

import numpy as np
import pytest

from core.node_system import Node, NodeGraph, NodeState
from core.socket_types import FIELD
from nodes.base.base_node import ParameterNode


class ScaleNode(Node):
    NODE_TYPE = "scale_test"
    NODE_TITLE = "Scale"

    def __init__(self, factor=2.0):
        self.factor = factor
        self.calls = 0
        super().__init__()

    def _init_sockets(self):
        self.add_input("field", FIELD)
        self.add_output("field", FIELD)

    def compute(self):
        self.calls += 1
        return {"field": self.get_input_value("field") * self.factor}


class BrokenNode(ScaleNode):
    def compute(self):
        return {}


def _chain():
    graph = NodeGraph()
    source = graph.add_node(ParameterNode("source", FIELD, np.ones((2, 2))))
    first = graph.add_node(ScaleNode(2.0))
    second = graph.add_node(ScaleNode(3.0))
    graph.connect(source, "value", first, "field")
    graph.connect(first, "field", second, "field")
    return graph, source, first, second


class TestNodeEvaluation:

    def test_lazy_chain(self):
        _, _, first, second = _chain()
        np.testing.assert_array_equal(second.get_output_value("field"), np.full((2, 2), 6.0))
        assert first.state == NodeState.CLEAN
        assert second.state == NodeState.CLEAN

    def test_cache_reused(self):
        _, _, first, second = _chain()
        second.get_output_value("field")
        second.get_output_value("field")
        assert first.calls == 1 and second.calls == 1

    def test_parameter_change_propagates(self):
        _, source, first, second = _chain()
        second.get_output_value("field")
        source.set_parameter("value", np.full((2, 2), 2.0))
        assert second.state == NodeState.DIRTY
        np.testing.assert_array_equal(second.get_output_value("field"), np.full((2, 2), 12.0))
        assert first.calls == 2

    def test_parameter_validated(self):
        _, source, _, _ = _chain()
        with pytest.raises(ValueError):
            source.set_parameter("value", np.array([[np.nan]]))
        with pytest.raises(KeyError):
            source.set_parameter("other", np.ones((2, 2)))

    def test_missing_output_marks_error(self):
        graph = NodeGraph()
        source = graph.add_node(ParameterNode("source", FIELD, np.ones((2, 2))))
        broken = graph.add_node(BrokenNode())
        graph.connect(source, "value", broken, "field")
        with pytest.raises(KeyError):
            broken.get_output_value("field")
        assert broken.state == NodeState.ERROR

    def test_unknown_socket(self):
        _, _, first, _ = _chain()
        with pytest.raises(KeyError):
            first.get_output_value("nothing")
        with pytest.raises(KeyError):
            first.get_input_value("nothing")


class TestNodeGraph:

    def test_execution_order(self):
        graph, source, first, second = _chain()
        assert graph.get_execution_order() == [source, first, second]

    def test_dependencies(self):
        _, source, first, second = _chain()
        assert second.get_dependencies() == {source, first}
        assert source.get_dependents() == {first, second}

    def test_cycle_rejected(self):
        graph, _, first, second = _chain()
        with pytest.raises(ValueError):
            graph.connect(second, "field", first, "field")

    def test_occupied_input_rejected(self):
        graph, source, first, _ = _chain()
        with pytest.raises(ValueError):
            graph.connect(source, "value", first, "field")

    def test_node_outside_graph(self):
        graph, source, _, _ = _chain()
        with pytest.raises(KeyError):
            graph.connect(source, "value", ScaleNode(), "field")

    def test_disconnect_marks_dirty(self):
        graph, source, first, _ = _chain()
        first.get_output_value("field")
        connection_id = next(c.id for c in graph.connections.values() if c.input_socket.node is first)
        graph.disconnect(connection_id)
        assert first.state == NodeState.DIRTY
        with pytest.raises(ValueError):
            first.get_output_value("field")
