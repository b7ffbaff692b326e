"""Exception types shared across the toolkit."""


class JpegSleuthError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedCoding(JpegSleuthError):
    """JPEG coding mode outside baseline sequential Huffman (progressive, arithmetic, lossless)."""


class CorruptStream(JpegSleuthError):
    """Malformed JPEG bitstream: bad marker sequence, Huffman underrun, or invalid code."""


class MissingTable(JpegSleuthError):
    """A referenced quantization or Huffman table was never defined."""


class InvalidTable(JpegSleuthError):
    """Quantization table violates its invariants (for example a zero step)."""


class OutOfRange(JpegSleuthError):
    """Scalar argument outside its documented range."""


class MisalignedInput(JpegSleuthError):
    """Tensor spatial dims are not multiples of 8."""


class MisalignedCrop(JpegSleuthError):
    """Crop origin or size is not a multiple of 8."""


class OutOfBounds(JpegSleuthError):
    """Crop or paste region exceeds the array bounds."""


class RegionOutOfBounds(JpegSleuthError):
    """Forgery donor region does not fit the target image."""


class DegenerateHistogram(JpegSleuthError):
    """Histogram has too few populated bins to score periodicity."""


class InsufficientData(JpegSleuthError):
    """Not enough blocks for a primary-step estimate."""


class ShapeMismatch(JpegSleuthError):
    """Learner input shape is inconsistent with the parameter shapes."""


class NonFinite(JpegSleuthError):
    """NaN or Inf appeared in parameters or gradients."""


class EmptyClass(JpegSleuthError):
    """Training set is missing one of the two classes."""


class DimMismatch(JpegSleuthError):
    """Ground truth and prediction dimensions differ."""


class NoPositives(JpegSleuthError):
    """Average precision is undefined: the ground truth has no positive pixels."""
