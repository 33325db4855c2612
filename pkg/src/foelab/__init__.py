"""foelab: spectra of ferromagnetic spin models ordered by total spin.

Builds Heisenberg-type Hamiltonians on finite graphs and chains, decomposes
their spectra by total spin, and checks the ferromagnetic ordering of energy
levels (FOEL) together with its supporting structures: Temperley-Lieb
diagram bases with their sign/dominance properties, the quantum-group
symmetric XXZ chain with droplet energies, and the exclusion-process
spectral-gap equality via the spin map.
"""

from .spinops import (
    HalfInt,
    HilbertShape,
    LocalSpinOps,
    RealOperator,
    TotalSpinOps,
    casimir,
    embed_site,
    heisenberg_bond,
    spin_matrices,
    total_spin_ops,
)
from .hamiltonians import (
    BondPolynomial,
    ChainSpec,
    SpinGraph,
    build_general_bond_chain,
    build_heisenberg,
    build_normalized_chain,
    build_spin1_beta_chain,
    build_xxz_chain,
    parse_graph_spec,
)
from .sectors import (
    FoelVerdict,
    HighestWeightBasis,
    SectorReport,
    check_foel,
    check_max_ordering,
    casimir_sector_energies,
    full_spectrum_by_s3,
    highest_weight_space,
    low_energy_by_deviation,
    s3_blocks,
    sector_energies,
)
from .temperley_lieb import (
    ArcDiagram,
    DiagramCombination,
    TLMatrix,
    check_dominance,
    embed_diagram,
    enumerate_arc_diagrams,
    expand_diagram_to_tensor,
    fk_hamiltonian_matrix,
    fk_highest_weight_basis,
    min_spec_comparison,
    perron_ground_vector,
    tl_generator_action,
    tl_hamiltonian_matrix,
)
from .qgroup import (
    QParam,
    QSectorReport,
    droplet_bandwidth,
    droplet_energy,
    finite_droplet_energy,
    q_casimir,
    q_sector_energies,
    suq2_generators,
)
from .ssep import (
    SSEPGenerator,
    check_aldous,
    spectral_gap,
    ssep_generator,
    verify_spin_map,
)

__version__ = "0.1.0"
