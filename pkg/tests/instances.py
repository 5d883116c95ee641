"""Small reconstructed instances with frozen expected shuttle counts."""

from qstab.code_model import parse_code
from qstab.hardware import make_linear


def pulling_instance():
    """Two linear traps of capacity 4. Data 1 and 2 sit in trap 1, so check
    0 lives entirely away from the ancilla while check 1 spans both traps."""
    code = parse_code("n=4\nZ1 Z2\nZ0 Z2 Z3\n", label="pulling")
    topo = make_linear(2, 4)
    initial = [[0, 3, 4, 5], [1, 2]]
    return code, topo, initial, 2


def reorder_instance():
    """Two linear traps of capacity 3; the ancilla starts beside data 2 and 3."""
    code = parse_code("n=4\nZ0 Z2 Z1\nZ3 Z1\n", label="reorder")
    topo = make_linear(2, 3)
    initial = [[0, 1], [2, 3, 4]]
    return code, topo, initial, 1
