from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional, Any

# Exact integers travel as decimal strings; elements as coordinate vectors of "p/q" strings.


class IdealOut(BaseModel):
    hnf: List[List[str]]
    den: str
    factors: Optional[List[List[Any]]] = None


class FieldInfoOut(BaseModel):
    polynomial: str
    degree: str
    discriminant: str
    signature: List[str]
    integral_basis: List[List[str]]
    roots_of_unity: str
    unit_rank: str


class ClassGroupOut(BaseModel):
    polynomial: str
    snf: List[str]
    class_number: str
    generators: List[IdealOut]
    ideal_class: Optional[List[str]] = None


class GroupStructureOut(BaseModel):
    degree: str
    orders: List[str]
    order: str
    description: str


class CohomologyOut(BaseModel):
    polynomial: str
    n: str
    ext: List[GroupStructureOut]
    h: List[GroupStructureOut]


class CupOut(BaseModel):
    n: str
    kind: str
    values: List[str]
    value_at: Optional[str] = None
    generators: List[Dict[str, Any]] = Field(default_factory=list)
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)


class KimResultOut(BaseModel):
    poly: str
    n: str
    v: List[str]
    vanishes: bool
    artin_value: str
    artin_value_note: str
    degree: str
    is_trivial: bool
    cup_value: str
    norm_image_member: Optional[bool] = None
    ideal: IdealOut
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    timing: Optional[str] = None


class ScanRecord(BaseModel):
    discriminant: str
    poly: Optional[str] = None
    n: str
    v: Optional[List[str]] = None
    vanishes: Optional[bool] = None
    artin_value: Optional[str] = None
    degree: Optional[str] = None
    norm_image_member: Optional[bool] = None
    error: Optional[str] = None
    message: Optional[str] = None


class KummerSpec(BaseModel):
    base_poly: str
    n: int
    v: str

    @field_validator('n')
    def validate_n(cls, v):
        if v < 1:
            raise ValueError('n must be a positive integer')
        return v

    @field_validator('v', mode='before')
    def coerce_v(cls, v):
        return str(v)


class ExplicitExtensionSpec(BaseModel):
    base_poly: str
    top_poly: str
    sigma_image: Optional[str] = None
