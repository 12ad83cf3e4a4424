/** Payload shapes of the promptbench HTTP API. */
export {};
