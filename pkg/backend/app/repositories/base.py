import hashlib
import logging
from pathlib import Path
from typing import Callable, Dict, Generic, List, Optional, TypeVar

from ..errors import BundleNotFoundError

logger = logging.getLogger(__name__)

T = TypeVar('T')

# parser(text, source) -> parsed object
Parser = Callable[[str, str], T]


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


class FileRepository(Generic[T]):
    """
    Read-only repository over the data files matching a glob under one directory.
    Every file read is checksummed so reports can name the exact data they used.
    """

    def __init__(self, root: Path, pattern: str, parser: Parser, data_root: Optional[Path] = None):
        self.root = Path(root)
        self.pattern = pattern
        self.parser = parser
        self.data_root = Path(data_root) if data_root is not None else self.root
        self.checksums: Dict[str, str] = {}

    def _relative(self, path: Path) -> str:
        try:
            return path.relative_to(self.data_root).as_posix()
        except ValueError:
            return path.as_posix()

    def paths(self) -> List[Path]:
        """
        List the data files of this repository.

        Returns:
            Matching paths sorted by name

        Raises:
            BundleNotFoundError: If the directory does not exist or has no matching files
        """
        if not self.root.is_dir():
            raise BundleNotFoundError(f'data directory {self.root} does not exist')
        paths = sorted(p for p in self.root.glob(self.pattern) if p.is_file())
        if not paths:
            raise BundleNotFoundError(f'no files matching {self.pattern!r} in {self.root}')
        return paths

    def exists(self, name: str) -> bool:
        return (self.root / name).is_file()

    def load(self, name: str) -> T:
        """
        Parse one file of the repository.

        Args:
            name: File name relative to the repository root

        Returns:
            The parsed object

        Raises:
            BundleNotFoundError: If the file does not exist
            ToolkitError: If the parser rejects the file
        """
        path = self.root / name
        if not path.is_file():
            raise BundleNotFoundError(f'{path} does not exist')
        return self._load_path(path)

    def _load_path(self, path: Path) -> T:
        relative = self._relative(path)
        text = path.read_text(encoding='utf-8')
        self.checksums[relative] = sha256_of(path)
        logger.debug('Loading %s', relative)
        return self.parser(text, relative)

    def load_all(self) -> Dict[str, T]:
        """
        Parse every file of the repository.

        Returns:
            Dict of file stem to parsed object, in file-name order
        """
        return {path.stem: self._load_path(path) for path in self.paths()}
