/** Payload shapes of the oracle service API (version 1). */
export {};
