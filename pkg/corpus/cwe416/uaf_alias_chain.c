int uaf_alias_chain() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(q);
    int x = *p;
    return x;
}
