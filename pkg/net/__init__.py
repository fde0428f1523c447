"""
Motor mínimo de redes totalmente convolucionales y variantes SGF
"""

from net.layers import (assemble_sgfe_input, conv_backward, conv_forward, deconv_backward,
                        deconv_forward, eltwise_max_backward, eltwise_max_forward,
                        frame_to_tensor, maxpool_backward, maxpool_forward, relu_backward,
                        relu_forward, sigmoid_backward, sigmoid_forward)
from net.network import (VARIANTS, ForwardCache, LayerSpec, NetworkScale, NetworkSpec, ParamStore,
                         backward, build_sgf, forward)
from net.serialization import load_params, save_params

__all__ = [
    'assemble_sgfe_input', 'conv_backward', 'conv_forward', 'deconv_backward', 'deconv_forward',
    'eltwise_max_backward', 'eltwise_max_forward', 'frame_to_tensor', 'maxpool_backward',
    'maxpool_forward', 'relu_backward', 'relu_forward', 'sigmoid_backward', 'sigmoid_forward',
    'VARIANTS', 'ForwardCache', 'LayerSpec', 'NetworkScale', 'NetworkSpec', 'ParamStore',
    'backward', 'build_sgf', 'forward',
    'load_params', 'save_params',
]
