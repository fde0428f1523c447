"""
Pruebas de los nodos del pipeline de forma aislada
"""

import numpy as np
import pytest

from core.node_system import NodeGraph, NodeState
from core.socket_types import FIELD
from nodes.base.base_node import ParameterNode
from nodes.inputs.frame_input import FrameInputNode
from nodes.operations.boundary_node import BoundaryNode
from nodes.operations.saliency_node import SaliencyNode
from nodes.outputs.saliency_output import SALIENCY_TEMPLATE, SaliencyOutputNode
from opb.boundary import opb_pipeline
from tests.helpers import FAST_OPB, moving_frames
from utils.io.image_loader import load_gray


def _source_with(node, *connections):
    graph = NodeGraph()
    source = graph.add_node(FrameInputNode())
    graph.add_node(node)
    for out_name, in_name in connections:
        graph.connect(source, out_name, node, in_name)
    return graph, source


class TestFrameInputNode:

    def test_previous_follows_push_order(self):
        node = FrameInputNode()
        first, second = moving_frames(2)
        node.push(first)
        assert node.get_output_value("previous") is None
        assert node.get_output_value("index") == 0
        node.push(second)
        np.testing.assert_array_equal(node.get_output_value("previous"), first)
        np.testing.assert_array_equal(node.get_output_value("frame"), second)
        assert node.get_output_value("index") == 1

    def test_requires_a_frame(self):
        node = FrameInputNode()
        with pytest.raises(ValueError):
            node.get_output_value("frame")
        assert node.state == NodeState.ERROR

    def test_rejects_invalid_frame(self):
        node = FrameInputNode()
        with pytest.raises(ValueError):
            node.push(np.full((4, 4, 3), 2.0))
        with pytest.raises(ValueError):
            node.push(np.zeros((4, 4)))

    def test_reset(self):
        node = FrameInputNode()
        node.push(moving_frames(1)[0])
        node.reset_state()
        assert node.index == -1 and node.previous is None


class TestBoundaryNode:

    def test_first_frame_has_no_boundary(self):
        node = BoundaryNode(FAST_OPB)
        _, source = _source_with(node, ("frame", "frame"), ("previous", "previous"))
        source.push(moving_frames(1)[0])
        assert node.get_output_value("boundary") is None

    def test_chains_previous_boundary(self):
        frames = moving_frames(3)
        node = BoundaryNode(FAST_OPB)
        _, source = _source_with(node, ("frame", "frame"), ("previous", "previous"))
        outputs = []
        for frame in frames:
            source.push(frame)
            outputs.append(node.get_output_value("boundary"))

        expected_first = opb_pipeline(frames[0], frames[1], None, FAST_OPB)
        expected_second = opb_pipeline(frames[1], frames[2], expected_first, FAST_OPB)
        np.testing.assert_array_equal(outputs[1], expected_first)
        np.testing.assert_array_equal(outputs[2], expected_second)

    def test_reset_forgets_boundary(self):
        node = BoundaryNode(FAST_OPB)
        _, source = _source_with(node, ("frame", "frame"), ("previous", "previous"))
        for frame in moving_frames(2):
            source.push(frame)
            node.get_output_value("boundary")
        node.reset_state()
        assert node.previous_boundary is None


class TestSaliencyNode:

    def test_rejects_swapped_models(self, models):
        with pytest.raises(ValueError):
            SaliencyNode(models["SGFE"])
        with pytest.raises(ValueError):
            SaliencyNode(models["SGF3"], models["SGF2"])

    def test_spatial_output_in_frame_dims(self, models):
        node = SaliencyNode(models["SGF2"])
        _, source = _source_with(node, ("frame", "frame"))
        source.push(moving_frames(1, size=(20, 24))[0])
        saliency = node.get_output_value("saliency")
        assert saliency.shape == (20, 24)
        assert node.get_output_value("trace").variant == "SGF2"

    def test_temporal_requires_boundary(self, models):
        node = SaliencyNode(models["SGF3"], models["SGFE"])
        _, source = _source_with(node, ("frame", "frame"))
        for k, frame in enumerate(moving_frames(2)):
            source.push(frame)
            if k == 0:
                node.get_output_value("saliency")
        with pytest.raises(ValueError):
            node.get_output_value("saliency")
        assert node.state == NodeState.ERROR

    def test_previous_saliency_is_own_prediction(self, models):
        graph = NodeGraph()
        source = graph.add_node(FrameInputNode())
        boundary = graph.add_node(ParameterNode("boundary", FIELD, np.zeros((20, 24))))
        node = graph.add_node(SaliencyNode(models["SGF3"], models["SGFE"]))
        graph.connect(source, "frame", node, "frame")
        graph.connect(boundary, "value", node, "boundary")

        source.push(moving_frames(1)[0])
        node.get_output_value("saliency")
        first_prediction = node.previous_saliency.copy()
        assert first_prediction.shape == (16, 16)

        source.push(moving_frames(2)[1])
        trace = node.get_output_value("trace")
        assert trace.used_previous and trace.variant == "SGFE"
        assert not np.array_equal(node.previous_saliency, first_prediction)


class TestSaliencyOutputNode:

    def test_collects_and_writes(self, tmp_path):
        graph = NodeGraph()
        value = graph.add_node(ParameterNode("saliency", FIELD, np.full((3, 4), 0.5)))
        output = graph.add_node(SaliencyOutputNode(tmp_path))
        graph.connect(value, "value", output, "saliency")

        assert output.get_output_value("count") == 1
        value.set_parameter("value", np.ones((3, 4)))
        assert output.get_output_value("count") == 2
        assert [p.name for p in output.paths] == [SALIENCY_TEMPLATE.format(0),
                                                  SALIENCY_TEMPLATE.format(1)]
        assert load_gray(output.paths[0]).tolist() == [[128] * 4] * 3
        assert load_gray(output.paths[1]).max() == 255

    def test_rejects_out_of_range_map(self):
        graph = NodeGraph()
        value = graph.add_node(ParameterNode("saliency", FIELD, np.full((3, 4), 1.5)))
        output = graph.add_node(SaliencyOutputNode())
        graph.connect(value, "value", output, "saliency")
        with pytest.raises(ValueError):
            output.get_output_value("count")
        assert output.paths == []
