"""
Sistema base de nodos para SalFlow
Define las clases fundamentales: Node, Socket, Connection y NodeGraph
"""

import logging
import uuid
from abc import ABC, abstractmethod
from enum import Enum
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Set

if TYPE_CHECKING:
    from .socket_types import SocketType

logger = logging.getLogger(__name__)


class SocketDirection(Enum):
    """Dirección de un socket"""
    INPUT = "input"
    OUTPUT = "output"


class NodeState(Enum):
    """Estados posibles de un nodo"""
    CLEAN = "clean"            # Salidas calculadas y vigentes
    DIRTY = "dirty"            # Requiere recálculo
    PROCESSING = "processing"
    ERROR = "error"


class Socket:
    """
    Punto de conexión de un nodo. Los valores que entran por un socket de
    entrada se validan con su tipo; None pasa si el socket es opcional.
    """

    def __init__(self, node: 'Node', socket_type: 'SocketType', direction: SocketDirection,
                 name: str, default_value: Any = None, optional: bool = False):
        self.id = str(uuid.uuid4())
        self.node = node
        self.socket_type = socket_type
        self.direction = direction
        self.name = name
        self.default_value = default_value
        self.optional = optional
        self.connections: List['Connection'] = []

    def can_connect_to(self, other: 'Socket') -> bool:
        """Direcciones opuestas, nodos distintos, tipos compatibles y entrada libre"""
        if self.node is other.node or self.direction == other.direction:
            return False
        if not self.socket_type.is_compatible_with(other.socket_type):
            return False
        target = other if other.direction == SocketDirection.INPUT else self
        return not target.connections

    def get_value(self) -> Any:
        if self.direction == SocketDirection.OUTPUT:
            return self.node.get_output_value(self.name)

        value = self.connections[0].get_value() if self.connections else self.default_value
        if value is None and self.optional:
            return None
        return self.socket_type.ensure(value, f"{self.node.title}.{self.name}")

    def add_connection(self, connection: 'Connection'):
        if connection not in self.connections:
            self.connections.append(connection)

    def remove_connection(self, connection: 'Connection'):
        if connection in self.connections:
            self.connections.remove(connection)


class Connection:
    """
    Conexión de una salida a una entrada
    """

    def __init__(self, output_socket: Socket, input_socket: Socket):
        if not output_socket.can_connect_to(input_socket):
            raise ValueError(
                f"No se puede conectar {output_socket.node.title}.{output_socket.name} "
                f"con {input_socket.node.title}.{input_socket.name}"
            )
        self.id = str(uuid.uuid4())
        self.output_socket = output_socket
        self.input_socket = input_socket
        output_socket.add_connection(self)
        input_socket.add_connection(self)

    def get_value(self) -> Any:
        return self.output_socket.get_value()

    def disconnect(self):
        self.output_socket.remove_connection(self)
        self.input_socket.remove_connection(self)


class Node(ABC):
    """
    Clase base abstracta para todos los nodos del pipeline.

    Las salidas se calculan bajo demanda y quedan en caché hasta que el
    nodo, o alguno del que depende, se marca como sucio.
    """

    NODE_TYPE = "base"
    NODE_TITLE = "Base Node"
    NODE_CATEGORY = "base"
    NODE_DESCRIPTION = "Nodo base"

    def __init__(self, title: Optional[str] = None):
        self.id = str(uuid.uuid4())
        self.title = title or self.NODE_TITLE
        self.state = NodeState.DIRTY

        self.input_sockets: Dict[str, Socket] = {}
        self.output_sockets: Dict[str, Socket] = {}

        self._output_cache: Dict[str, Any] = {}
        self._cache_valid = False

        self._init_sockets()

    @abstractmethod
    def _init_sockets(self):
        """Declara los sockets del nodo"""

    @abstractmethod
    def compute(self) -> Dict[str, Any]:
        """Calcula las salidas; devuelve {nombre de salida: valor}"""

    def add_input(self, name: str, socket_type: 'SocketType', default_value: Any = None,
                  optional: bool = False) -> Socket:
        socket = Socket(self, socket_type, SocketDirection.INPUT, name, default_value, optional)
        self.input_sockets[name] = socket
        return socket

    def add_output(self, name: str, socket_type: 'SocketType') -> Socket:
        socket = Socket(self, socket_type, SocketDirection.OUTPUT, name)
        self.output_sockets[name] = socket
        return socket

    def get_input_value(self, name: str) -> Any:
        if name not in self.input_sockets:
            raise KeyError(f"Input socket '{name}' not found in node {self.title}")
        return self.input_sockets[name].get_value()

    def get_output_value(self, name: str) -> Any:
        if name not in self.output_sockets:
            raise KeyError(f"Output socket '{name}' not found in node {self.title}")
        if not self._cache_valid:
            self._recalculate()
        return self._output_cache.get(name)

    def _recalculate(self):
        try:
            self._set_state(NodeState.PROCESSING)
            results = self.compute()
            missing = set(self.output_sockets) - set(results)
            if missing:
                raise KeyError(f"{self.title}: salidas sin calcular {sorted(missing)}")
            self._output_cache = results
            self._cache_valid = True
            self._set_state(NodeState.CLEAN)
        except Exception:
            self._set_state(NodeState.ERROR)
            logger.exception(f"Error en el nodo {self.title}")
            raise

    def mark_dirty(self, propagate: bool = True):
        """Invalida la caché del nodo y, si se pide, la de sus dependientes"""
        self._cache_valid = False
        self._set_state(NodeState.DIRTY)
        if propagate:
            for dependent in self.get_dependents():
                dependent._cache_valid = False
                dependent._set_state(NodeState.DIRTY)

    def _set_state(self, new_state: NodeState):
        if self.state != new_state:
            self.state = new_state
            logger.debug(f"{self.title}: {new_state.value}")

    def get_dependencies(self) -> Set['Node']:
        """Todos los nodos de los que depende, directa o indirectamente"""
        found: Set['Node'] = set()
        pending = [c.output_socket.node for s in self.input_sockets.values() for c in s.connections]
        while pending:
            node = pending.pop()
            if node not in found:
                found.add(node)
                pending.extend(c.output_socket.node
                               for s in node.input_sockets.values() for c in s.connections)
        return found

    def get_dependents(self) -> Set['Node']:
        """Todos los nodos que dependen de este, directa o indirectamente"""
        found: Set['Node'] = set()
        pending = [c.input_socket.node for s in self.output_sockets.values() for c in s.connections]
        while pending:
            node = pending.pop()
            if node not in found:
                found.add(node)
                pending.extend(c.input_socket.node
                               for s in node.output_sockets.values() for c in s.connections)
        return found

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} id={self.id[:8]} title='{self.title}'>"


class NodeGraph:
    """
    Colección de nodos y conexiones con orden topológico
    """

    def __init__(self):
        self.nodes: Dict[str, Node] = {}
        self.connections: Dict[str, Connection] = {}

    def add_node(self, node: Node) -> Node:
        self.nodes[node.id] = node
        return node

    def connect(self, output_node: Node, output_name: str,
                input_node: Node, input_name: str) -> Connection:
        """Conecta output_node.output_name con input_node.input_name"""
        for node in (output_node, input_node):
            if node.id not in self.nodes:
                raise KeyError(f"Nodo fuera del grafo: {node.title}")
        if output_name not in output_node.output_sockets:
            raise KeyError(f"Output socket '{output_name}' not found in node {output_node.title}")
        if input_name not in input_node.input_sockets:
            raise KeyError(f"Input socket '{input_name}' not found in node {input_node.title}")
        if input_node is output_node or input_node in output_node.get_dependencies():
            raise ValueError(f"La conexión {output_node.title} -> {input_node.title} crea un ciclo")

        connection = Connection(output_node.output_sockets[output_name],
                                input_node.input_sockets[input_name])
        self.connections[connection.id] = connection
        input_node.mark_dirty()
        return connection

    def disconnect(self, connection_id: str):
        connection = self.connections.pop(connection_id, None)
        if connection is not None:
            connection.disconnect()
            connection.input_socket.node.mark_dirty()

    def get_execution_order(self) -> List[Node]:
        """Orden topológico (algoritmo de Kahn), estable respecto al orden de inserción"""
        in_degree = {
            node_id: sum(len(s.connections) for s in node.input_sockets.values())
            for node_id, node in self.nodes.items()
        }
        queue = [node_id for node_id, degree in in_degree.items() if degree == 0]
        result = []

        while queue:
            current = self.nodes[queue.pop(0)]
            result.append(current)
            for socket in current.output_sockets.values():
                for connection in socket.connections:
                    dependent_id = connection.input_socket.node.id
                    in_degree[dependent_id] -= 1
                    if in_degree[dependent_id] == 0:
                        queue.append(dependent_id)

        if len(result) != len(self.nodes):
            raise ValueError("Cycle detected in node graph")
        return result

    def reset_state(self):
        """Reinicia el estado interno de los nodos que lo tienen"""
        for node in self.get_execution_order():
            reset = getattr(node, 'reset_state', None)
            if callable(reset):
                reset()
            node.mark_dirty(propagate=False)
