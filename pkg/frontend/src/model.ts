// Server payload shapes. The UI computes nothing algebraic itself:
// every displayed quantity is read from these documents as-is.

export type Outcome = "P" | "N";
export type Variant = "numeric" | "poly";
export type SessionStatus = "in_progress" | "won";

export interface MoveDoc {
  type: "reduce" | "consolidate_reduce";
  amount: number;
  heapIndex?: number;
}

export interface HistoryEntry {
  player: string;
  move: MoveDoc;
  heaps: number[];
}

export interface StateVectorDoc {
  factors: number[];
  components: number[];
}

export interface MumberDoc {
  policy: string;
  value: number;
}

export interface FieldInfo {
  p: number;
  n: number;
  modulus: number;
  modulusPolynomial?: string;
  order?: number;
}

export interface HeapDetail {
  heap: number;
  // numeric sessions
  residue?: number;
  factorResidues?: number[] | null;
  // poly sessions
  polynomial?: string;
  power?: number | null;
}

export interface AnalysisView {
  variant: Variant;
  heaps: number[];
  product: number;
  outcome: Outcome;
  stranded: boolean;
  stateVector: StateVectorDoc | null;
  mumber: MumberDoc | null;
  grundy: number | null;
  heapDetails: HeapDetail[];
  hintAvailable: boolean;
  // numeric sessions
  modulus?: number;
  productInteger?: string;
  // poly sessions
  field?: FieldInfo;
  productPolynomial?: string;
  productPower?: number | null;
}

export interface SessionDoc {
  id: string;
  variant: Variant;
  policy: string;
  players: string[];
  playerToMove: string;
  status: SessionStatus;
  winner: string | null;
  initialHeaps: number[];
  heaps: number[];
  history: HistoryEntry[];
  createdAt: string;
  updatedAt: string;
  modulus?: number;
  field?: FieldInfo;
  legalMoves: MoveDoc[];
  analysis: AnalysisView;
}

export interface HintExplanation {
  kind: "direct" | "compound" | "losing";
  text: string;
  heapIndex?: number;
  heapValue?: string;
  coproduct?: number;
  inverse?: number;
  targetResidue?: number;
  productElement?: number;
  inverseElement?: number;
  targetElement?: number;
  targetPolynomial?: string;
  consolidatedHeap?: string;
  target?: string;
  amount?: number;
}

export interface HintResponse {
  move: MoveDoc | null;
  explanation: HintExplanation;
}

export interface CreateSessionBody {
  variant: Variant;
  heaps: number[];
  modulus?: number;
  field?: { p: number; n: number; modulus: number };
  opponent?: "engine" | "human";
  policy?: "stranded-only" | "always";
  firstPlayer?: "human" | "engine";
}
