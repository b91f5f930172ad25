import os
import sys

# Allow oversubscribed thread counts before numba is first imported; the
# acceptance suite exercises a 4-thread run regardless of core count.
os.environ.setdefault("NUMBA_NUM_THREADS", "4")

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))
