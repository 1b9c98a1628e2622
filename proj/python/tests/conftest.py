import os
import sys

# A build tree exports DMOD_PYTHONPATH so tests can run without installing the package.
if os.environ.get("DMOD_PYTHONPATH"):
    sys.path.insert(0, os.environ["DMOD_PYTHONPATH"])
