from .descriptors import (
    DescriptorSet,
    aromatic_rings,
    crippen_logp,
    descriptors,
    hb_acceptors,
    hb_donors,
    molecular_weight,
    rotatable_bonds,
    structural_alerts,
    tpsa,
)
from .qed import QedResult, desirability, qed, qed_from_descriptors
from .tables import alert_manifest

__all__ = [
    "DescriptorSet",
    "QedResult",
    "alert_manifest",
    "aromatic_rings",
    "crippen_logp",
    "descriptors",
    "desirability",
    "hb_acceptors",
    "hb_donors",
    "molecular_weight",
    "qed",
    "qed_from_descriptors",
    "rotatable_bonds",
    "structural_alerts",
    "tpsa",
]
