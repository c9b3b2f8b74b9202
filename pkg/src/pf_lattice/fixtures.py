"""Small named matrices used as golden fixtures and CLI demo inputs."""

import numpy as np

# All-ones 4x4: irreducible, Perron value 4, Perron vector (1,1,1,1).
ALL_ONES_4 = np.ones((4, 4))

# Swap of the first two coordinates plus identity on the last two. Peripheral
# projection is I, induced permutation (1 2)(3)(4), period 2. Commutes with ALL_ONES_4.
SWAP_PLUS_IDENTITY = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])

# Nilpotent E_34, commutes with SWAP_PLUS_IDENTITY.
CORNER_NILPOTENT = np.zeros((4, 4))
CORNER_NILPOTENT[2, 3] = 1.0

# Irreducible, commutes with SWAP_PLUS_IDENTITY, Perron vector (1,1,2,2), value 6.
WEIGHTED_BLOCKS = np.array([
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 2.5, 2.5],
    [1.0, 1.0, 2.5, 2.5],
])

CYCLIC_3 = np.roll(np.eye(3), 1, axis=0)  # e1 -> e2 -> e3 -> e1
DIAG_2_1 = np.diag([2.0, 1.0])
UPPER_JORDAN_2 = np.array([[1.0, 1.0], [0.0, 1.0]])
STRICT_UPPER_2 = np.array([[0.0, 1.0], [0.0, 0.0]])
PROJ_E1_2 = np.array([[1.0, 0.0], [0.0, 0.0]])

NAMED = {
    "ones4": ALL_ONES_4,
    "swap_identity": SWAP_PLUS_IDENTITY,
    "corner_nilpotent": CORNER_NILPOTENT,
    "weighted_blocks": WEIGHTED_BLOCKS,
    "cyclic3": CYCLIC_3,
    "diag21": DIAG_2_1,
    "upper2": UPPER_JORDAN_2,
    "nilpotent2": STRICT_UPPER_2,
    "proj2": PROJ_E1_2,
    "identity2": np.eye(2),
}
