from abc import abstractmethod
from typing import Any, Optional

from ..syntax.env import NamedEnv
from ..utils import PathType, read_text

__all__ = ["BaseFormat"]


class BaseFormat:
    """Input file format abstract base class.

    Formats are stateless readers: :meth:`loads` turns the text of a file into
    the domain object it describes. Names in term-bearing formats are resolved
    against an optional definitions environment.
    """

    name = ""

    @abstractmethod
    def loads(self, text: str, env: Optional[NamedEnv] = None) -> Any:  # pragma: no cover
        """Parse the contents of a file.

        Parameters
        ----------
        text : str
            The file contents.
        env : Optional[NamedEnv]
            Definitions used to resolve names. ``None`` means the prelude.

        Raises
        ------
        ValueError
            If ``text`` is malformed. Parse errors carry their line number.
        """
        pass

    def load(self, path: PathType, env: Optional[NamedEnv] = None) -> Any:
        return self.loads(read_text(path), env)
