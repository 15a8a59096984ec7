int uaf_pointer_arith() {
    int *p = malloc(8);
    free(p);
    p = p + 1;
    return 0;
}
