from .csv import SampleReader, read_samples
from .json import ModelReader, read_model
