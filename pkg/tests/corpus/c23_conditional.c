int main()
{
    int x;
    int y;
    int m = x > y ? x : y;
    int a = x < 0 ? -x : x;
    MYASSERT(m >= x);
    MYASSERT(a >= 0);
    return 0;
}
