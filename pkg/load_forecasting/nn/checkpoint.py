"""Input/output of trained models as JSON documents."""

import json
import os
from typing import Any, Dict, Optional, Tuple

from load_forecasting.nn.network import NetworkParameters


def save_checkpoint(path, params: NetworkParameters, extra: Optional[Dict[str, Any]] = None) -> None:
    """Save a model checkpoint.

    The document holds the topology and row-major weight arrays under
    ``"network"``; anything in `extra` (normalizer, feature spec, resolved
    config) is stored alongside.
    """
    doc = {'network': params.to_dict()}
    doc.update(extra or {})
    directory = os.path.dirname(os.fspath(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write('\n')


def load_checkpoint(path) -> Tuple[NetworkParameters, Dict[str, Any]]:
    """Load a model checkpoint and return the parameters plus the remaining entries."""
    with open(path) as f:
        doc = json.load(f)
    params = NetworkParameters.from_dict(doc.pop('network'))
    return params, doc
