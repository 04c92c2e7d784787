import os
import sys

# allow running pytest from a fresh checkout without installation
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
