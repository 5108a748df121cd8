from ._trifound import *  # noqa: F401,F403
from ._trifound import __version__  # noqa: F401
